//! Infinite tensor products through their finite marginals.
//!
//! An infinite product `X_J` never exists as a finite carrier, so it is
//! represented by what its universal property quantifies over: a
//! [`CompatibleFamily`] of morphisms `A → X_F`, one per finite `F ⊆ J`,
//! coherent under marginalization. Index injections act on families by
//! reindexing, and every zero--one law ingredient is checked exactly on a
//! finite window of labels.
//!
//! Statistics are limited to ones that factor through a finite window
//! ([`StatisticFamily`]); tail statistics have no finite representation and
//! are only exercised by sampling.

mod family;
mod index;
mod verify;

pub use family::{
    canonical, diagonal_family, iid_family, independent_family, injection_action, joint_family,
    product_family, regroup_family, reindexed, with_override, CompatibleFamily, FactorRule,
    StatisticFamily,
};
pub use index::{permutations, show_labels, subsets, IndexInjection, IndexSet, Label, STAR};
pub use verify::{
    check_aseq_lemma, check_catdet_shadow, check_determinism_lemma, check_exchangeability,
    check_functoriality, check_hs_splitting, check_infindep_lemma, check_kolmogorov_finite,
    check_marginalization_determinism, check_same_assignments, displays_independence,
    validate_compatibility,
};
