//! Welfare-maximizing joint interventions in linear-quadratic network games.
//!
//! A planner with a quadratic budget chooses both the standalone marginal
//! utilities `a` and the link weights `g` of a weighted network to maximize
//! `Σ xᵢ² = aᵀ(I − φg)⁻²a`, where `x = (I − φg)⁻¹a` is the equilibrium of the
//! game. The crate provides
//!
//! * [`network`], [`spectrum`] and [`game`]: the model, its spectral
//!   quantities and canonical extremal graphs;
//! * [`single`]: the fixed-network problem, solved exactly in the eigenbasis;
//! * [`joint`]: the joint problem, solved by multi-start projected gradient
//!   ascent on the network with envelope gradients, plus optimality checks
//!   and a brute-force oracle for tiny instances;
//! * [`analysis`]: inequality (Theil T) and limiting welfare diagnostics;
//! * [`orientation`]: balanced max-cut, which picks the bipartition of the
//!   large-budget network under strategic substitutes.
//!
//! ```
//! use nalgebra::DVector;
//! use netgame::{make_complete_bipartite, solve_single, GameConfig};
//!
//! let ghat = make_complete_bipartite(2, 2, 1.0).unwrap();
//! let cfg = GameConfig::new(0.2, DVector::zeros(4), ghat.clone()).unwrap();
//! let s = solve_single(&cfg, &ghat, 1.0).unwrap();
//! // With â = 0 the shadow price is (1 − φλ₁)⁻² for every budget.
//! assert!((s.mu_star - 1.0 / 0.36).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod error;
pub mod game;
pub mod joint;
pub mod network;
pub mod orientation;
pub mod single;
pub mod spectrum;

pub use analysis::{
    eigencentrality_entropy, equal_payoff_welfare_bound, equal_magnitude_bound, sign_partition,
    theil_index, theil_index_or_limit, welfare_limit, welfare_ratio_limit, Convention,
    InequalityReport, SignPartition, WelfareMode,
};
pub use error::{Error, Result};
pub use game::{
    regular_wbar_bound, equilibrium, regularity_margin, wbar_keeps_regular, welfare,
    EquilibriumResult, GameConfig,
};
pub use joint::{
    check_sign_structure, objective_and_gradient, oracle_joint, small_budget_asymptotics, solve_joint,
    solve_joint_from, JointProblem, JointSolution, KktReport, SmallBudgetLimits, SolverOptions,
    SignStructureReport,
};
pub use network::{
    make_complete, make_complete_bipartite, make_equal_magnitude_network, validate_network, Network,
};
pub use orientation::{
    balanced_maxcut_exact, balanced_maxcut_heuristic, cut_weight, orient_bipartite, CutMethod,
    CutResult,
};
pub use single::{equal_payoff_single, shadow_price_limit, solve_single, SingleSolution};
pub use spectrum::{spectrum, Spectrum};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/single.md")]
    mod single {}
    #[doc = include_str!("../../../book/src/joint.md")]
    mod joint {}
    #[doc = include_str!("../../../book/src/large_budgets.md")]
    mod large_budgets {}
    #[doc = include_str!("../../../book/src/inequality.md")]
    mod inequality {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
