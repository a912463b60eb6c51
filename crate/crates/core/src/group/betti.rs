use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum BettiProvenance {
    FreeGroup(usize),
    FiniteGroup(usize),
    UserSupplied,
}

/// First two L²-Betti numbers of a group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BettiInput {
    pub beta0: f64,
    pub beta1: f64,
    pub provenance: BettiProvenance,
}

impl BettiInput {
    /// `β₀ = 0, β₁ = k − 1` for the free group of rank `k ≥ 1`; rank 0 is the trivial group.
    pub fn free_group(rank: usize) -> Self {
        if rank == 0 {
            let mut trivial = Self::finite_group(1);
            trivial.provenance = BettiProvenance::FreeGroup(0);
            return trivial;
        }
        Self {
            beta0: 0.0,
            beta1: rank as f64 - 1.0,
            provenance: BettiProvenance::FreeGroup(rank),
        }
    }

    /// `β₀ = 1/|G|, β₁ = 0`.
    pub fn finite_group(order: usize) -> Self {
        Self {
            beta0: 1.0 / order as f64,
            beta1: 0.0,
            provenance: BettiProvenance::FiniteGroup(order),
        }
    }

    /// Values passed through unvalidated.
    pub fn user_supplied(beta0: f64, beta1: f64) -> Self {
        Self {
            beta0,
            beta1,
            provenance: BettiProvenance::UserSupplied,
        }
    }

    pub fn is_flagged(&self) -> bool {
        self.provenance == BettiProvenance::UserSupplied
    }
}

/// `δ = β₁⁽²⁾ − β₀⁽²⁾ + 1`.
pub fn betti_delta_formula(input: &BettiInput) -> f64 {
    input.beta1 - input.beta0 + 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_groups_have_delta_equal_to_rank() {
        for k in 1..=5 {
            assert_eq!(betti_delta_formula(&BettiInput::free_group(k)), k as f64);
        }
    }

    #[test]
    fn finite_and_trivial_groups() {
        assert!((betti_delta_formula(&BettiInput::finite_group(6)) - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(betti_delta_formula(&BettiInput::finite_group(1)), 0.0);
        assert_eq!(betti_delta_formula(&BettiInput::free_group(0)), 0.0);
        let user = BettiInput::user_supplied(0.0, 0.5);
        assert!(user.is_flagged());
        assert_eq!(betti_delta_formula(&user), 1.5);
    }
}
