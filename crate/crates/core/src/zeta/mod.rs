//! Zeta values, the maps from order polynomials to rational zeta series, and
//! verification of finite-form identities.

pub mod expr;
pub mod identity;
pub mod value;

pub use expr::{n_tilde, n_tilde2, ZetaExpr};
pub use identity::{
    chain_identity, entry22_check, entry22_formula, entry22_oracle, entry22_record, eval_zeta_expr,
    ffe_check, finite_form_identity, goldbach_identity, inverse_power_sum, operad_eval_zeta,
    verify_identity, zeta_number, IdentityRecord, Lhs, NumericCheck, ZetaArg, ZetaVariant,
};
pub use value::{
    cached_zeta_minus_one, dispatch, zeta, zeta_even_closed_form, zeta_minus_one, zeta_value,
    Backend, Estimate, PrecisionContext, PrecisionTask, ZetaNumber,
};
