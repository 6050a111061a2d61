//! Rule-based noise removal and the statistical bounds that justify it.

mod loss;
mod rules;

pub use loss::{
    default_loss_evidence, loss_probability, loss_report, normal_upper_tail, poisson_scale,
    LossEstimate, LossEvidence, LossReport,
};
pub use rules::{
    apply_rules, default_rules, first_match, parse_rules, CleanseOutcome, CleanseRule, RuleCount,
    RuleKind, DEFAULT_RULES,
};
