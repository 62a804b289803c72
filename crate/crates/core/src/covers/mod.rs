//! Cellular covers: the decision procedure, the lemma certifiers and the construction of
//! covers with prescribed kernels.

mod cc10;
mod certificate;
mod decide;
mod lemmas;

pub use cc10::{build_prop_cc10, demo_theorem1, rigid_group, CC10Config, CC10Instance, Theorem1Run};
pub use certificate::{Certificate, Condition, Status, Witness};
pub use decide::{decide_cellular, decide_instance, CoverInstance};
pub use lemmas::{adjoin_marked, certify_cor_cc6, certify_lemma_cc7, certify_lemma_cc9, report_lemma_cc8};
