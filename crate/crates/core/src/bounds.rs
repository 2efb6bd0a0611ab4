//! Closed-form two-hop probabilities and the recovery / impossibility bounds
//! built from them.
//!
//! Everything here is a pure function of `(p, |G|, n, ...)`. Products of many
//! small factors are evaluated in log space and exponentiated at the end, so
//! very small results underflow to `0.0` rather than producing NaN.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("{name} = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("flip probability {p} sits at the critical point {p_c}; the failure bound is vacuous")]
    Degenerate { p: f64, p_c: f64 },
}

fn domain(name: &'static str, value: f64, domain: &'static str) -> BoundsError {
    BoundsError::Domain { name, value, domain }
}

fn check_unit(p: f64) -> Result<(), BoundsError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(domain("p", p, "[0, 1]"))
    }
}

fn check_order(order: usize) -> Result<(), BoundsError> {
    if order >= 2 {
        Ok(())
    } else {
        Err(domain("group order", order as f64, ">= 2"))
    }
}

fn check_half_open(p: f64) -> Result<(), BoundsError> {
    if p > 0.0 && p < 0.5 {
        Ok(())
    } else {
        Err(domain("p", p, "(0, 1/2)"))
    }
}

/// `f(p) = 1 - 2p + p²·|G|/(|G|-1)`: probability that a two-hop product
/// `Y(u,w)·Y(w,v)` equals the true difference on `(u, v)`.
pub fn two_hop_correct_prob(p: f64, order: usize) -> Result<f64, BoundsError> {
    check_unit(p)?;
    check_order(order)?;
    let k = order as f64;
    Ok(1.0 - 2.0 * p + p * p * k / (k - 1.0))
}

/// `h(p) = 2(p - p²)/(|G|-1) + p²(|G|-2)/(|G|-1)²`: probability that the
/// two-hop product equals one particular wrong element.
pub fn two_hop_wrong_prob(p: f64, order: usize) -> Result<f64, BoundsError> {
    check_unit(p)?;
    check_order(order)?;
    let k1 = order as f64 - 1.0;
    Ok(2.0 * (p - p * p) / k1 + p * p * (order as f64 - 2.0) / (k1 * k1))
}

/// `p_c = 1 - 1/|G|`, where `f` and `h` both equal `1/|G|`.
pub fn critical_flip_prob(order: usize) -> f64 {
    1.0 - 1.0 / order as f64
}

/// The law of one two-hop product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoHopDistribution {
    pub flip_prob: f64,
    pub group_order: usize,
    /// `f(p)`.
    pub p_correct: f64,
    /// `h(p)`, the same for every wrong element.
    pub p_each_wrong: f64,
}

impl TwoHopDistribution {
    pub fn new(p: f64, order: usize) -> Result<Self, BoundsError> {
        Ok(Self {
            flip_prob: p,
            group_order: order,
            p_correct: two_hop_correct_prob(p, order)?,
            p_each_wrong: two_hop_wrong_prob(p, order)?,
        })
    }

    /// `ε = f(p) - 1/|G|`.
    pub fn correct_margin(&self) -> f64 {
        self.p_correct - 1.0 / self.group_order as f64
    }

    /// `ε̂ = 1/|G| - h(p)`.
    pub fn wrong_margin(&self) -> f64 {
        1.0 / self.group_order as f64 - self.p_each_wrong
    }

    /// `f + (|G|-1)·h`, which is 1 up to rounding.
    pub fn total_mass(&self) -> f64 {
        self.p_correct + (self.group_order as f64 - 1.0) * self.p_each_wrong
    }
}

/// Union-bound-plus-Hoeffding bound on the probability that the triangle
/// estimator errs on some edge of `K_n`:
/// `2n(n-1)·|G|·exp(-2λ(n-2))` with `λ = min(ε², ε̂²)`.
pub fn recovery_failure_bound(n: usize, p: f64, order: usize) -> Result<f64, BoundsError> {
    if n < 3 {
        return Err(domain("n", n as f64, ">= 3"));
    }
    let lambda = hoeffding_rate(p, order)?;
    let nf = n as f64;
    let log_bound = (2.0 * nf * (nf - 1.0) * order as f64).ln() - 2.0 * lambda * (nf - 2.0);
    Ok(log_bound.exp())
}

/// `λ = min(ε², ε̂²)`; errors when `p` is (numerically) the critical point.
pub fn hoeffding_rate(p: f64, order: usize) -> Result<f64, BoundsError> {
    let dist = TwoHopDistribution::new(p, order)?;
    let p_c = critical_flip_prob(order);
    let (eps, eps_hat) = (dist.correct_margin(), dist.wrong_margin());
    if (p - p_c).abs() < 1e-12 || eps <= 0.0 || eps_hat <= 0.0 {
        return Err(BoundsError::Degenerate { p, p_c });
    }
    Ok((eps * eps).min(eps_hat * eps_hat))
}

/// `(1 - (p/K)^d)^a`, which tends to zero when `a → ∞` and `p^d·a → ∞`.
pub fn decay_quantity(p: f64, a: f64, d: f64, k: f64) -> Result<f64, BoundsError> {
    check_half_open(p)?;
    if !(a > 0.0) {
        return Err(domain("a", a, "(0, inf)"));
    }
    if !(d > 0.0) {
        return Err(domain("d", d, "(0, inf)"));
    }
    if !(k > 0.5) {
        return Err(domain("K", k, "(1/2, inf)"));
    }
    Ok((a * (-(p / k).powf(d)).ln_1p()).exp())
}

/// `1 - (1 - (p/(|G|-1))^d)^|D|`: lower bound on the probability that some
/// vertex of an independent set `D` has every incident observation offset by
/// a fixed `g ≠ e`, when all degrees are at most `d`.
pub fn offset_exists_lower_bound(
    p: f64,
    d: usize,
    order: usize,
    set_size: usize,
) -> Result<f64, BoundsError> {
    check_half_open(p)?;
    check_order(order)?;
    if d == 0 {
        return Err(domain("d", 0.0, ">= 1"));
    }
    if set_size == 0 {
        return Err(domain("set size", 0.0, ">= 1"));
    }
    let per_vertex = (p / (order as f64 - 1.0)).powi(d as i32);
    Ok(-(set_size as f64 * (-per_vertex).ln_1p()).exp_m1())
}
