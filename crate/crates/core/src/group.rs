//! Finite abelian groups presented by invariant factors.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// `Z/d₁ ⊕ … ⊕ Z/d_k` with every `dᵢ > 1` and `dᵢ | dᵢ₊₁`. The trivial group
/// has no factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    invariant_factors: Vec<i64>,
}

/// Coordinates of an element of an [`AbelianGroup`], reduced into `[0, dᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<i64>);

impl AbelianGroup {
    /// Factors equal to 1 are dropped; the rest must be positive.
    pub fn new(factors: impl IntoIterator<Item = i64>) -> Self {
        let invariant_factors: Vec<i64> = factors.into_iter().filter(|&d| d != 1).collect();
        assert!(
            invariant_factors.iter().all(|&d| d > 1),
            "invariant factors must be positive"
        );
        Self { invariant_factors }
    }

    pub fn trivial() -> Self {
        Self {
            invariant_factors: Vec::new(),
        }
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }

    pub fn exponent(&self) -> i64 {
        self.invariant_factors.iter().fold(1, |a, &b| a.lcm(&b))
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn element(&self, coords: impl IntoIterator<Item = i64>) -> GroupElement {
        let coords: Vec<i64> = coords.into_iter().collect();
        assert_eq!(coords.len(), self.rank(), "coordinate count");
        GroupElement(
            coords
                .iter()
                .zip(&self.invariant_factors)
                .map(|(x, d)| x.mod_floor(d))
                .collect(),
        )
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.element(a.0.iter().zip(&b.0).map(|(x, y)| x + y))
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.element(a.0.iter().map(|x| -x))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.element(a.0.iter().zip(&b.0).map(|(x, y)| x - y))
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        self.element(
            a.0.iter()
                .zip(&self.invariant_factors)
                .map(|(x, d)| (k.mod_floor(d) * x).mod_floor(d)),
        )
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.0.len() == self.rank()
            && a.0
                .iter()
                .zip(&self.invariant_factors)
                .all(|(x, d)| (0..*d).contains(x))
    }

    /// Smallest `k ≥ 1` with `k·a = 0`.
    pub fn element_order(&self, a: &GroupElement) -> i64 {
        a.0.iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| d / x.gcd(d))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![Vec::new()];
        for &d in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(GroupElement).collect()
    }

    /// Direct sum, concatenating coordinates. The result lists factors in the
    /// given order and is not re-normalized into a divisibility chain.
    pub fn direct_sum(groups: &[AbelianGroup]) -> AbelianGroup {
        AbelianGroup {
            invariant_factors: groups
                .iter()
                .flat_map(|g| g.invariant_factors.iter().copied())
                .collect(),
        }
    }
}

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let mut runs: Vec<(i64, usize)> = Vec::new();
        for &d in &self.invariant_factors {
            match runs.last_mut() {
                Some((last, count)) if *last == d => *count += 1,
                _ => runs.push((d, 1)),
            }
        }
        let parts: Vec<String> = runs
            .iter()
            .map(|&(d, c)| {
                if c == 1 {
                    format!("Z/{d}")
                } else {
                    format!("(Z/{d})^{c}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}
