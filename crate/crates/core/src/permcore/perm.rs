use std::fmt;

use num_integer::Integer;

use super::PermError;

/// Number of points every permutation acts on (the Hoffman–Singleton vertices).
pub const DEGREE: usize = 50;

/// A permutation of `{0, .., DEGREE - 1}` stored as its image array.
///
/// Products act on the right: `p.then(&q)` first applies `p`, then `q`,
/// and conjugation is `h^g = g⁻¹ h g`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: [u8; DEGREE],
}

impl Permutation {
    pub fn identity() -> Self {
        let mut images = [0u8; DEGREE];
        for (i, slot) in images.iter_mut().enumerate() {
            *slot = i as u8;
        }
        Self { images }
    }

    /// Builds a permutation from an image array, rejecting anything that is
    /// not a bijection.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        if images.len() != DEGREE {
            return Err(PermError::WrongDegree(images.len()));
        }
        let mut seen = [false; DEGREE];
        let mut out = [0u8; DEGREE];
        for (i, &img) in images.iter().enumerate() {
            if img >= DEGREE || seen[img] {
                return Err(PermError::NotBijection);
            }
            seen[img] = true;
            out[i] = img as u8;
        }
        Ok(Self { images: out })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PermError> {
        let images: Vec<usize> = bytes.iter().map(|&b| b as usize).collect();
        Self::from_images(&images)
    }

    /// Permutation of the first `n` points fixing everything else; used for
    /// graphs with fewer than `DEGREE` vertices.
    pub fn from_partial_images(images: &[usize]) -> Result<Self, PermError> {
        if images.len() > DEGREE {
            return Err(PermError::WrongDegree(images.len()));
        }
        let mut full: Vec<usize> = (0..DEGREE).collect();
        full[..images.len()].copy_from_slice(images);
        Self::from_images(&full)
    }

    /// Builds a permutation from disjoint cycles given as point lists.
    pub fn from_cycles(cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..DEGREE).collect();
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p >= DEGREE {
                    return Err(PermError::NotBijection);
                }
                images[p] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    #[inline]
    pub fn as_bytes(&self) -> &[u8; DEGREE] {
        &self.images
    }

    /// `self` followed by `other`.
    #[inline]
    pub fn then(&self, other: &Permutation) -> Permutation {
        let mut images = [0u8; DEGREE];
        for (slot, &img) in images.iter_mut().zip(self.images.iter()) {
            *slot = other.images[img as usize];
        }
        Permutation { images }
    }

    #[inline]
    pub fn inverse(&self) -> Permutation {
        let mut images = [0u8; DEGREE];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u8;
        }
        Permutation { images }
    }

    /// `g⁻¹ self g`, which maps `g(x) ↦ g(self(x))`.
    #[inline]
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let mut images = [0u8; DEGREE];
        for x in 0..DEGREE {
            images[g.images[x] as usize] = g.images[self.images[x] as usize];
        }
        Permutation { images }
    }

    pub fn pow(&self, exp: u64) -> Permutation {
        let mut acc = Permutation::identity();
        let mut base = *self;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img as usize)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.then(other) == other.then(self)
    }

    /// `[self, other] = self⁻¹ other⁻¹ self other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .then(&other.inverse())
            .then(self)
            .then(other)
    }

    /// Sorted cycle lengths, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = [false; DEGREE];
        let mut lengths = Vec::new();
        for start in 0..DEGREE {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable();
        lengths
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, len| acc.lcm(&(len as u64)))
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..DEGREE).filter(|&i| self.image(i) == i).collect()
    }
}

impl Default for Permutation {
    fn default() -> Self {
        Self::identity()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        let mut seen = [false; DEGREE];
        for start in 0..DEGREE {
            if seen[start] || self.image(start) == start {
                continue;
            }
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
                first = false;
                p = self.image(p);
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
