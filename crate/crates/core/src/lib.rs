//! Exact root counting for variable-separated plane curves over prime power rings.
//!
//! A curve `f(x1, x2) = g(x1) + h(x2)` with integer coefficients is counted over
//! `(Z/p^k)^2` by a recursion over perturbations `f(ζ + p·x) / p^s`: smooth
//! points of the mod-`p` reduction are lifted by Hensel's lemma, singular
//! points (or whole singular lines) are zoomed into, and the base case is an
//! exact `F_p` point count. The recursion is materialized as a [`CountTree`]
//! whose weighted fold is the count.
//!
//! ```
//! use ppcount::{count_points, CountConfig, PrimePowerCtx, SeparatedCurve};
//!
//! let ctx = PrimePowerCtx::new(5, 2).unwrap();
//! // x2^2 - x1^3
//! let curve = SeparatedCurve::from_i64(&[0, 0, 0, -1], &[0, 0, 1], &ctx);
//! let result = count_points(&curve, &CountConfig::default(), 0).unwrap();
//! assert_eq!(result.n.to_string(), "45");
//! ```

pub mod counter;
pub mod curve;
mod error;
pub mod fpcount;
pub mod modarith;
pub mod oracle;
pub mod unipoly;

pub use counter::{
    build_tree, count_points, poincare_prefix, tree_audit, AuditReport, Branch, CountConfig,
    CountResult, CountStats, CountTree, EdgeLabel, PoincarePrefix, TreeNode,
};
pub use curve::{Axis, LiftSet, LocusElement, Perturbation, SeparatedCurve, SingularLocus};
pub use error::{Error, Result};
pub use modarith::{valp, valp_capped, PrimePowerCtx, Valuation};
pub use unipoly::{FpPoly, RootFinder, RootMethod, RootProfile, UniPoly};
