use num_traits::Zero;
use serde::Serialize;

use super::ShapeError;
use crate::exact::{rat, AffineScalar, ExactScalar};

/// Isomorphism type of ⟨t, ρ⟩ for an involution t and an order-3 subgroup ρ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AxisPairClass {
    /// t centralizes ρ.
    C6,
    /// t inverts ρ.
    S3,
    A4,
    S4,
    Gl23,
    A5,
    L27,
}

impl AxisPairClass {
    pub const ALL: [AxisPairClass; 7] = [
        AxisPairClass::C6,
        AxisPairClass::S3,
        AxisPairClass::A4,
        AxisPairClass::S4,
        AxisPairClass::Gl23,
        AxisPairClass::A5,
        AxisPairClass::L27,
    ];

    pub fn from_order(order: u64, commuting: bool) -> Result<Self, ShapeError> {
        Ok(match order {
            6 if commuting => AxisPairClass::C6,
            6 => AxisPairClass::S3,
            12 => AxisPairClass::A4,
            24 => AxisPairClass::S4,
            48 => AxisPairClass::Gl23,
            60 => AxisPairClass::A5,
            168 => AxisPairClass::L27,
            n => return Err(ShapeError::UnexpectedAxisPairOrder(n)),
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            AxisPairClass::C6 => "C6",
            AxisPairClass::S3 => "S3",
            AxisPairClass::A4 => "A4",
            AxisPairClass::S4 => "S4",
            AxisPairClass::Gl23 => "GL2(3)",
            AxisPairClass::A5 => "A5",
            AxisPairClass::L27 => "L2(7)",
        }
    }

    pub fn group_order(self) -> u64 {
        match self {
            AxisPairClass::C6 | AxisPairClass::S3 => 6,
            AxisPairClass::A4 => 12,
            AxisPairClass::S4 => 24,
            AxisPairClass::Gl23 => 48,
            AxisPairClass::A5 => 60,
            AxisPairClass::L27 => 168,
        }
    }

    /// Number of involutions in this class for a fixed ρ.
    pub fn expected_count(self) -> usize {
        match self {
            AxisPairClass::C6 => 3,
            AxisPairClass::S3 => 18,
            AxisPairClass::A4 => 36,
            AxisPairClass::S4 => 108,
            AxisPairClass::Gl23 => 36,
            AxisPairClass::A5 => 108,
            AxisPairClass::L27 => 216,
        }
    }

    /// (a_t, u_ρ).
    pub fn inner_product(self) -> ExactScalar {
        match self {
            AxisPairClass::C6 => ExactScalar::zero(),
            AxisPairClass::S3 => rat(1, 4),
            AxisPairClass::A4 => rat(1, 9),
            AxisPairClass::S4 | AxisPairClass::Gl23 => rat(1, 36),
            AxisPairClass::A5 => rat(1, 18),
            AxisPairClass::L27 => rat(1, 24),
        }
    }
}

/// Isomorphism type of ⟨ρ, σ⟩ for two order-3 subgroups, with the two
/// subdivisions of L2(7) and A7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SubgroupPairClass {
    C3,
    C3xC3,
    A4,
    F21,
    Sl23,
    C3xA4,
    A5,
    Sl25,
    /// Some involution of H normalizes both ρ and σ.
    L27Normalized,
    L27,
    A6,
    /// Both generators have cycle type 3².
    A7Pure,
    /// A 3-cycle and a 3² element.
    A7Mixed,
    /// ⟨ρ, σ⟩ is the whole group.
    Whole,
}

impl SubgroupPairClass {
    pub const ALL: [SubgroupPairClass; 14] = [
        SubgroupPairClass::C3,
        SubgroupPairClass::C3xC3,
        SubgroupPairClass::A4,
        SubgroupPairClass::F21,
        SubgroupPairClass::Sl23,
        SubgroupPairClass::C3xA4,
        SubgroupPairClass::A5,
        SubgroupPairClass::Sl25,
        SubgroupPairClass::L27Normalized,
        SubgroupPairClass::L27,
        SubgroupPairClass::A6,
        SubgroupPairClass::A7Pure,
        SubgroupPairClass::A7Mixed,
        SubgroupPairClass::Whole,
    ];

    /// Classes determined by the order alone.
    pub fn from_order(order: u64) -> Result<Self, ShapeError> {
        Ok(match order {
            3 => SubgroupPairClass::C3,
            9 => SubgroupPairClass::C3xC3,
            12 => SubgroupPairClass::A4,
            21 => SubgroupPairClass::F21,
            24 => SubgroupPairClass::Sl23,
            36 => SubgroupPairClass::C3xA4,
            60 => SubgroupPairClass::A5,
            120 => SubgroupPairClass::Sl25,
            360 => SubgroupPairClass::A6,
            126_000 => SubgroupPairClass::Whole,
            n => return Err(ShapeError::UnexpectedSubgroupPairOrder(n)),
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            SubgroupPairClass::C3 => "C3",
            SubgroupPairClass::C3xC3 => "C3xC3",
            SubgroupPairClass::A4 => "A4",
            SubgroupPairClass::F21 => "F21",
            SubgroupPairClass::Sl23 => "SL2(3)",
            SubgroupPairClass::C3xA4 => "C3xA4",
            SubgroupPairClass::A5 => "A5",
            SubgroupPairClass::Sl25 => "SL2(5)",
            SubgroupPairClass::L27Normalized => "L2(7), common normalizing involution",
            SubgroupPairClass::L27 => "L2(7)",
            SubgroupPairClass::A6 => "A6",
            SubgroupPairClass::A7Pure => "A7, both of type 3^2",
            SubgroupPairClass::A7Mixed => "A7, types 3 and 3^2",
            SubgroupPairClass::Whole => "U3(5)",
        }
    }

    pub fn group_order(self) -> u64 {
        match self {
            SubgroupPairClass::C3 => 3,
            SubgroupPairClass::C3xC3 => 9,
            SubgroupPairClass::A4 => 12,
            SubgroupPairClass::F21 => 21,
            SubgroupPairClass::Sl23 => 24,
            SubgroupPairClass::C3xA4 => 36,
            SubgroupPairClass::A5 => 60,
            SubgroupPairClass::Sl25 => 120,
            SubgroupPairClass::L27Normalized | SubgroupPairClass::L27 => 168,
            SubgroupPairClass::A6 => 360,
            SubgroupPairClass::A7Pure | SubgroupPairClass::A7Mixed => 2520,
            SubgroupPairClass::Whole => 126_000,
        }
    }

    /// Number of subgroups σ in this class for a fixed ρ.
    pub fn expected_count(self) -> usize {
        match self {
            SubgroupPairClass::C3 => 1,
            SubgroupPairClass::C3xC3 => 12,
            SubgroupPairClass::A4 => 36,
            SubgroupPairClass::F21 => 144,
            SubgroupPairClass::Sl23 => 18,
            SubgroupPairClass::C3xA4 => 72,
            SubgroupPairClass::A5 => 54,
            SubgroupPairClass::Sl25 => 9,
            SubgroupPairClass::L27Normalized => 108,
            SubgroupPairClass::L27 => 216,
            SubgroupPairClass::A6 => 216,
            SubgroupPairClass::A7Pure => 216,
            SubgroupPairClass::A7Mixed => 216,
            SubgroupPairClass::Whole => 432,
        }
    }

    /// (u_ρ, u_σ), affine in the unknown x.
    pub fn inner_product(self) -> AffineScalar {
        let c = |n, d| AffineScalar::constant(rat(n, d));
        match self {
            SubgroupPairClass::C3 => c(8, 5),
            SubgroupPairClass::C3xC3 => c(0, 1),
            SubgroupPairClass::A4 => c(136, 405),
            SubgroupPairClass::F21 => c(4, 27),
            SubgroupPairClass::Sl23 => c(8, 81),
            SubgroupPairClass::C3xA4 => c(64, 405),
            SubgroupPairClass::A5 | SubgroupPairClass::Sl25 => c(16, 405),
            SubgroupPairClass::L27Normalized => c(32, 405),
            SubgroupPairClass::L27 => c(4, 81),
            SubgroupPairClass::A6 => c(32, 405),
            SubgroupPairClass::A7Pure => c(8, 81),
            SubgroupPairClass::A7Mixed => c(32, 405),
            SubgroupPairClass::Whole => AffineScalar::unknown(),
        }
    }
}
