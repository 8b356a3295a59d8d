use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::int_matrix::IntMatrix;
use super::normal_form::snf;

/// Isomorphism type of a finitely generated abelian group:
/// `Z^free_rank (+) Z/d_1 (+) ... (+) Z/d_k` with `1 < d_1 | d_2 | ... | d_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct GroupInvariants {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl GroupInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        GroupInvariants {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// Invariants of `Z^gens / span(columns of relations)`.
    pub fn of_presentation(gens: usize, relations: &IntMatrix) -> Self {
        assert_eq!(relations.rows(), gens);
        let d = snf(relations).diagonal();
        let rank = d.iter().filter(|x| !x.is_zero()).count();
        GroupInvariants {
            free_rank: gens - rank,
            invariant_factors: d
                .into_iter()
                .filter(|x| !x.is_zero() && !x.is_one())
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Number of cyclic summands in the invariant-factor decomposition.
    pub fn minimal_generators(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
