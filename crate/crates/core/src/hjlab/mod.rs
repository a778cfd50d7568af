//! Located words, the Hales–Jewett variant searches, and the projections
//! of words and grid points into `(ℕ₀, *_f)`.

mod phj;
mod words;

pub use phj::{
    b_part, decomposed_projection, every_point_coloring_has_instance, m_project, phj_search,
    phj_substitute, phj_threshold, point_count, point_index, projected_point_coloring, verify_phj,
    PhjInstance, PhjOutcome, PhjPoint,
};
pub use words::{
    every_word_coloring_has_instance, h_project, hj_search, hj_threshold, projected_coloring,
    verify_hj, word_index, HjInstance, HjOutcome, LocatedVariableWord, LocatedWord, MAX_WINDOW,
};
