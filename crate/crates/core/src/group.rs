//! Finite groups as explicit Cayley tables.
//!
//! Elements are dense indices `0..order`. Every constructor fixes a canonical
//! enumeration (cyclic: residues ascending, symmetric: lexicographic one-line
//! notation, products: `i_a * |b| + i_b`) so that any argmax tie-break on
//! element indices is reproducible.

use std::fmt::Write as _;

use thiserror::Error;

/// Largest order accepted by [`GroupTable::direct_product`] and [`GroupTable::from_table`].
pub const MAX_ORDER: usize = 10_000;

/// Largest `k` accepted by [`GroupTable::symmetric`].
pub const MAX_SYMMETRIC_DEGREE: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid group order: {0}")]
    InvalidOrder(String),
    #[error("group order {order} exceeds capacity {max}")]
    Capacity { order: usize, max: usize },
    #[error("element index {index} out of range for group of order {order}")]
    Index { index: usize, order: usize },
    #[error("group axiom violated: {0}")]
    Axiom(String),
}

/// A finite group stored as a multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    /// Row-major `order * order` table, `mul[a * order + b] = a·b`.
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    labels: Option<Vec<String>>,
}

impl GroupTable {
    /// `Z/nZ` under addition; identity is 0.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidOrder("cyclic group needs n >= 1".into()));
        }
        if n > MAX_ORDER {
            return Err(GroupError::Capacity { order: n, max: MAX_ORDER });
        }
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push((a + b) % n);
            }
        }
        let inv = (0..n).map(|a| (n - a) % n).collect();
        let labels = (0..n).map(|a| a.to_string()).collect();
        Ok(Self {
            order: n,
            mul,
            inv,
            identity: 0,
            labels: Some(labels),
        })
    }

    /// The symmetric group `S_k`, `1 <= k <= 5`.
    ///
    /// Elements are permutations of `0..k` in lexicographic order of their
    /// one-line notation, so index 0 is the identity. The product `a·b` is
    /// composition `(a∘b)(i) = a(b(i))`.
    pub fn symmetric(k: usize) -> Result<Self, GroupError> {
        if k == 0 || k > MAX_SYMMETRIC_DEGREE {
            return Err(GroupError::InvalidOrder(format!(
                "symmetric group degree must be in 1..={MAX_SYMMETRIC_DEGREE}, got {k}"
            )));
        }
        let perms = lexicographic_permutations(k);
        let order = perms.len();
        let index_of = |p: &[usize]| -> usize {
            perms
                .binary_search_by(|q| q.as_slice().cmp(p))
                .expect("composition of permutations is a permutation")
        };
        let mut mul = Vec::with_capacity(order * order);
        let mut scratch = vec![0; k];
        for a in &perms {
            for b in &perms {
                for i in 0..k {
                    scratch[i] = a[b[i]];
                }
                mul.push(index_of(&scratch));
            }
        }
        let inv = perms
            .iter()
            .map(|p| {
                let mut q = vec![0; k];
                for (i, &pi) in p.iter().enumerate() {
                    q[pi] = i;
                }
                index_of(&q)
            })
            .collect();
        let labels = perms
            .iter()
            .map(|p| {
                let body: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
                format!("[{}]", body.join(" "))
            })
            .collect();
        Ok(Self {
            order,
            mul,
            inv,
            identity: 0,
            labels: Some(labels),
        })
    }

    /// Componentwise product `a × b`; element `(i, j)` has index `i * |b| + j`.
    pub fn direct_product(a: &GroupTable, b: &GroupTable) -> Result<Self, GroupError> {
        let order = a
            .order
            .checked_mul(b.order)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(GroupError::Capacity {
                order: a.order.saturating_mul(b.order),
                max: MAX_ORDER,
            })?;
        let pair = |i: usize| (i / b.order, i % b.order);
        let join = |i: usize, j: usize| i * b.order + j;
        let mut mul = Vec::with_capacity(order * order);
        for x in 0..order {
            let (xa, xb) = pair(x);
            for y in 0..order {
                let (ya, yb) = pair(y);
                mul.push(join(a.mul(xa, ya), b.mul(xb, yb)));
            }
        }
        let inv = (0..order)
            .map(|x| {
                let (xa, xb) = pair(x);
                join(a.inverse(xa), b.inverse(xb))
            })
            .collect();
        let labels = (0..order)
            .map(|x| {
                let (xa, xb) = pair(x);
                format!("({},{})", a.label(xa), b.label(xb))
            })
            .collect();
        Ok(Self {
            order,
            mul,
            inv,
            identity: join(a.identity, b.identity),
            labels: Some(labels),
        })
    }

    /// Builds a group from a raw row-major Cayley table and checks every axiom.
    pub fn from_table(order: usize, mul: Vec<usize>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::InvalidOrder("order must be >= 1".into()));
        }
        if order > MAX_ORDER {
            return Err(GroupError::Capacity { order, max: MAX_ORDER });
        }
        if mul.len() != order * order {
            return Err(GroupError::Axiom(format!(
                "table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if let Some(&bad) = mul.iter().find(|&&c| c >= order) {
            return Err(GroupError::Axiom(format!("closure: entry {bad} out of range")));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| mul[e * order + a] == a && mul[a * order + e] == a))
            .ok_or_else(|| GroupError::Axiom("no two-sided identity".into()))?;
        let mut inv = Vec::with_capacity(order);
        for a in 0..order {
            let b = (0..order)
                .find(|&b| mul[a * order + b] == identity)
                .ok_or_else(|| GroupError::Axiom(format!("element {a} has no inverse")))?;
            inv.push(b);
        }
        let table = Self {
            order,
            mul,
            inv,
            identity,
            labels: None,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// `a·b`. Panics if either index is out of range; see [`GroupTable::checked_mul`].
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        assert!(a < self.order && b < self.order, "element index out of range");
        self.mul[a * self.order + b]
    }

    /// `a⁻¹`. Panics if `a` is out of range; see [`GroupTable::checked_inverse`].
    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// The group difference `a⁻¹·b`.
    #[inline]
    pub fn difference(&self, a: usize, b: usize) -> usize {
        self.mul(self.inv[a], b)
    }

    pub fn checked_mul(&self, a: usize, b: usize) -> Result<usize, GroupError> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.mul[a * self.order + b])
    }

    pub fn checked_inverse(&self, a: usize) -> Result<usize, GroupError> {
        self.check_index(a)?;
        Ok(self.inv[a])
    }

    fn check_index(&self, index: usize) -> Result<(), GroupError> {
        if index < self.order {
            Ok(())
        } else {
            Err(GroupError::Index {
                index,
                order: self.order,
            })
        }
    }

    /// Human-readable name of an element, falling back to its index.
    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(labels) => labels[a].clone(),
            None => a.to_string(),
        }
    }

    /// Smallest non-identity element, or `None` for the trivial group.
    pub fn first_non_identity(&self) -> Option<usize> {
        (0..self.order).find(|&a| a != self.identity)
    }

    /// Order of `a`: least `k >= 1` with `a^k = e`.
    pub fn element_order(&self, a: usize) -> usize {
        let mut acc = a;
        let mut k = 1;
        while acc != self.identity {
            acc = self.mul(acc, a);
            k += 1;
        }
        k
    }

    /// Exhaustively checks closure, identity, inverses, and associativity.
    ///
    /// Associativity costs `order³` lookups.
    pub fn validate(&self) -> Result<(), GroupError> {
        let n = self.order;
        if self.mul.len() != n * n || self.inv.len() != n || self.identity >= n {
            return Err(GroupError::Axiom("table shape inconsistent with order".into()));
        }
        if let Some(pos) = self.mul.iter().position(|&c| c >= n) {
            return Err(GroupError::Axiom(format!(
                "closure: mul[{}][{}] = {} out of range",
                pos / n,
                pos % n,
                self.mul[pos]
            )));
        }
        let e = self.identity;
        for a in 0..n {
            if self.mul[e * n + a] != a || self.mul[a * n + e] != a {
                return Err(GroupError::Axiom(format!("identity fails at {a}")));
            }
            let ai = self.inv[a];
            if ai >= n || self.mul[a * n + ai] != e || self.mul[ai * n + a] != e {
                return Err(GroupError::Axiom(format!("inverse fails at {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul[a * n + b];
                for c in 0..n {
                    let bc = self.mul[b * n + c];
                    if self.mul[ab * n + c] != self.mul[a * n + bc] {
                        return Err(GroupError::Axiom(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Cayley table as text: one row per line, space-separated indices.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in self.mul.chunks(self.order) {
            let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

fn lexicographic_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut out = vec![current.clone()];
    // Standard next-permutation step.
    while let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) {
        let pivot = i - 1;
        let j = (pivot + 1..k)
            .rev()
            .find(|&j| current[j] > current[pivot])
            .expect("a successor exists right of the pivot");
        current.swap(pivot, j);
        current[i..].reverse();
        out.push(current.clone());
    }
    out
}
