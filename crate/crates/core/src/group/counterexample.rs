//! The eight-variable sequence in `ℂ𝔽₂` whose δ jumps up in the limit.
//!
//! Along the sequence the supports of the variables contain `u` and `v`, so
//! each term generates the whole group algebra of `𝔽₂` and has δ = 2. The
//! limit drops the two variables scaled by `1/k`, leaving the algebra of
//! `Γ = ker(φ: 𝔽₂ → ℤ/2)`, free of rank 3, so δ = 3.

use serde::Serialize;

use super::betti::{betti_delta_formula, BettiInput};
use super::schreier::{schreier_rank, FreeWord, SchreierGraph};
use super::table::Permutation;

/// Radii `k` at which the norm bound is tabulated.
const BOUND_SAMPLES: [u32; 4] = [1, 10, 100, 1000];

#[derive(Debug, Clone, Serialize)]
pub struct SequenceVariable {
    pub name: &'static str,
    pub at_k: &'static str,
    pub limit: &'static str,
}

/// `‖W_j^(k) − W_j‖ ≤ bound`, from `‖Re g‖, ‖Im g‖ ≤ 1` for unitaries `g`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormBound {
    pub k: u32,
    pub bound: f64,
}

/// A word in the kernel generators, checked by free reduction.
#[derive(Debug, Clone, Serialize)]
pub struct Rewriting {
    pub schreier_generator: String,
    pub expression: String,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub variables: Vec<SequenceVariable>,
    /// Group elements carrying the per-k variables; they include `u` and `v`.
    pub per_k_support: Vec<String>,
    pub per_k_group_rank: usize,
    pub per_k_delta: f64,
    pub limit_support: Vec<String>,
    pub limit_support_in_kernel: bool,
    pub kernel: SchreierGraph,
    /// Each Schreier generator rewritten in `u², v², uv`.
    pub rewriting: Vec<Rewriting>,
    pub limit_delta: f64,
    pub norm_bounds: Vec<NormBound>,
    pub liminf_delta: f64,
    pub verdict: String,
    pub notes: Vec<String>,
}

impl CounterexampleReport {
    pub fn holds(&self) -> bool {
        self.liminf_delta < self.limit_delta
            && self.limit_support_in_kernel
            && self.kernel.kernel_verified()
            && self.rewriting.iter().all(|r| r.verified)
    }

    pub fn text_summary(&self) -> String {
        let mut out = String::new();
        out.push_str("sequence (k = 1, 2, ...):\n");
        for v in &self.variables {
            out.push_str(&format!(
                "  {:<8} = {:<14} -> {}\n",
                v.name, v.at_k, v.limit
            ));
        }
        out.push_str(&format!(
            "per-k support {{{}}} generates F{}; delta = {}\n",
            self.per_k_support.join(", "),
            self.per_k_group_rank,
            self.per_k_delta
        ));
        out.push_str(&format!(
            "limit support {{{}}} lies in ker(phi), index {}, rank {}; delta = {}\n",
            self.limit_support.join(", "),
            self.kernel.index(),
            self.kernel.rank(),
            self.limit_delta
        ));
        out.push_str(&format!(
            "Schreier generators: {}\n",
            self.kernel.rendered_generators().join(", ")
        ));
        for r in &self.rewriting {
            out.push_str(&format!(
                "  {} = {} [{}]\n",
                r.schreier_generator,
                r.expression,
                if r.verified { "ok" } else { "FAILED" }
            ));
        }
        for b in &self.norm_bounds {
            out.push_str(&format!("||W^({})|| <= {}\n", b.k, b.bound));
        }
        out.push_str(&self.verdict);
        out.push('\n');
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

fn variables() -> Vec<SequenceVariable> {
    let v = |name, at_k, limit| SequenceVariable { name, at_k, limit };
    vec![
        v("X1", "Re u^2", "Re u^2"),
        v("X2", "Im u^2", "Im u^2"),
        v("Y1", "Re v^2", "Re v^2"),
        v("Y2", "Im v^2", "Im v^2"),
        v("Z1", "Re uv", "Re uv"),
        v("Z2", "Im uv", "Im uv"),
        v("W1", "(1/k) Re u", "0"),
        v("W2", "(1/k) Im v", "0"),
    ]
}

pub fn counterexample_report() -> CounterexampleReport {
    let names = vec!["u".to_string(), "v".to_string()];
    let u = FreeWord::generator(0);
    let v = FreeWord::generator(1);
    let u2 = u.pow(2);
    let v2 = v.pow(2);
    let uv = u.mul(&v);

    // Re g and Im g are supported on {g, g⁻¹}
    let per_k = [&u2, &v2, &uv, &u, &v];
    let per_k_support: Vec<String> = per_k
        .iter()
        .flat_map(|w| [w.render(&names), w.inverse().render(&names)])
        .collect();
    // the supports contain both free generators
    let per_k_group_rank = 2;
    let per_k_delta = betti_delta_formula(&BettiInput::free_group(per_k_group_rank));

    let parity = Permutation::from_images(vec![1, 0]).expect("transposition");
    let kernel = schreier_rank(2, &[parity.clone(), parity]).expect("valid homomorphism");
    let limit = [&u2, &v2, &uv];
    let limit_support: Vec<String> = limit
        .iter()
        .flat_map(|w| [w.render(&names), w.inverse().render(&names)])
        .collect();
    let limit_support_in_kernel = limit.iter().all(|w| kernel.in_kernel(w));

    // explicit rewriting of each Schreier generator in u², v², uv
    let candidates: [(&str, FreeWord); 5] = [
        ("u^2", u2.clone()),
        ("v^2", v2.clone()),
        ("uv", uv.clone()),
        ("(uv)^-1 u^2", uv.inverse().mul(&u2)),
        ("v^2 (uv)^-1", v2.mul(&uv.inverse())),
    ];
    let rewriting = kernel
        .subgroup_generators
        .iter()
        .map(|g| {
            let hit = candidates.iter().find(|(_, w)| w == g);
            Rewriting {
                schreier_generator: g.render(&names),
                expression: hit.map_or_else(|| "?".to_string(), |(e, _)| e.to_string()),
                verified: hit.is_some(),
            }
        })
        .collect();

    let limit_delta = betti_delta_formula(&BettiInput::free_group(kernel.rank()));
    let norm_bounds = BOUND_SAMPLES
        .iter()
        .map(|&k| NormBound {
            k,
            bound: 1.0 / f64::from(k),
        })
        .collect();
    let liminf_delta = per_k_delta;
    let verdict = format!("liminf delta = {liminf_delta} < {limit_delta} = delta(limit)");

    CounterexampleReport {
        variables: variables(),
        per_k_support,
        per_k_group_rank,
        per_k_delta,
        limit_support,
        limit_support_in_kernel,
        kernel,
        rewriting,
        limit_delta,
        norm_bounds,
        liminf_delta,
        verdict,
        notes: vec![
            "W2 is defined as (1/k) Im v, but the per-k generated algebra is also described \
             through (1/k) v; either reading puts v in the support, so the group-level \
             arithmetic is unchanged"
                .to_string(),
            "the same values hold for delta_0, delta^* and the star variant of delta, \
             which all agree on generators of free group algebras"
                .to_string(),
        ],
    }
}
