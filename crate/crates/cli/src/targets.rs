//! Verification targets and the criteria each one runs.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    #[value(name = "norton-sakuma")]
    NortonSakuma,
    #[value(name = "shape")]
    Shape,
    #[value(name = "gram525")]
    Gram525,
    #[value(name = "gram-full")]
    GramFull,
    #[value(name = "a7")]
    A7,
    #[value(name = "lemma15")]
    Lemma15,
    #[value(name = "lemma16")]
    Lemma16,
    #[value(name = "lemma17")]
    Lemma17,
    #[value(name = "resurrection")]
    Resurrection,
    #[value(name = "all")]
    All,
}

/// Criteria run by `build`.
pub const BUILD_CRITERIA: [u8; 4] = [1, 2, 3, 4];

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::NortonSakuma => "norton-sakuma",
            Target::Shape => "shape",
            Target::Gram525 => "gram525",
            Target::GramFull => "gram-full",
            Target::A7 => "a7",
            Target::Lemma15 => "lemma15",
            Target::Lemma16 => "lemma16",
            Target::Lemma17 => "lemma17",
            Target::Resurrection => "resurrection",
            Target::All => "all",
        }
    }

    pub fn criteria(self) -> &'static [u8] {
        match self {
            Target::NortonSakuma => &[5],
            Target::Shape => &[3, 6, 7],
            Target::Gram525 => &[8],
            Target::GramFull => &[9, 10, 11],
            Target::A7 => &[15],
            Target::Lemma15 => &[13],
            Target::Lemma16 => &[14],
            Target::Lemma17 => &[10, 11, 12],
            Target::Resurrection => &[10],
            Target::All => &u35_core::suite::CRITERIA,
        }
    }

    /// Whether the target runs without a group cache.
    pub fn cache_free(self) -> bool {
        self == Target::NortonSakuma
    }
}
