use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use super::GroupError;

/// A generator or its inverse. Letters order as `x0 < x0^-1 < x1 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Position in the letter order `x0, x0^-1, x1, x1^-1, ...`.
    pub fn slot(self) -> usize {
        2 * self.generator + usize::from(self.inverse)
    }

    pub fn from_slot(slot: usize) -> Self {
        Letter::new(slot / 2, slot % 2 == 1)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.generator)
        } else {
            write!(f, "x{}", self.generator)
        }
    }
}

/// A reduced word in a free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        FreeWord(vec![Letter::new(i, false)])
    }

    pub fn letter(l: Letter) -> Self {
        FreeWord(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Largest generator index used plus one (0 for the empty word).
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    /// Sum of exponents of generator `i`.
    pub fn exponent_sum(&self, i: usize) -> i64 {
        self.0
            .iter()
            .filter(|l| l.generator == i)
            .map(|l| if l.inverse { -1 } else { 1 })
            .sum()
    }
}

impl Mul for &FreeWord {
    type Output = FreeWord;

    fn mul(self, rhs: &FreeWord) -> FreeWord {
        let mut out = self.0.clone();
        let mut rest = rhs.0.as_slice();
        while let (Some(&a), Some(&b)) = (out.last(), rest.first()) {
            if a.inv() != b {
                break;
            }
            out.pop();
            rest = &rest[1..];
        }
        out.extend_from_slice(rest);
        FreeWord(out)
    }
}

impl Mul for FreeWord {
    type Output = FreeWord;

    fn mul(self, rhs: FreeWord) -> FreeWord {
        &self * &rhs
    }
}

impl fmt::Display for FreeWord {
    /// Space-separated letters with `^-1` marking inverses; the empty word
    /// prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = GroupError;

    /// Parses `"x0 x1^-1 x0"`. `"1"` and the empty string denote the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (body, inverse) = match token.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (token, false),
            };
            let index = body
                .strip_prefix('x')
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| GroupError::Parse(format!("bad letter `{token}`")))?;
            letters.push(Letter::new(index, inverse));
        }
        Ok(FreeWord::reduce(letters))
    }
}

/// A homomorphism `F_source -> F_target` given by the images of the
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorImages {
    source_rank: usize,
    target_rank: usize,
    images: Vec<FreeWord>,
}

impl GeneratorImages {
    pub fn new(target_rank: usize, images: Vec<FreeWord>) -> Result<Self, GroupError> {
        if let Some(w) = images.iter().find(|w| w.min_rank() > target_rank) {
            return Err(GroupError::GeneratorOutOfRange {
                generator: w.min_rank() - 1,
                rank: target_rank,
            });
        }
        Ok(GeneratorImages {
            source_rank: images.len(),
            target_rank,
            images,
        })
    }

    pub fn identity(rank: usize) -> Self {
        GeneratorImages {
            source_rank: rank,
            target_rank: rank,
            images: (0..rank).map(FreeWord::generator).collect(),
        }
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    /// `next ∘ self` as generator images.
    pub fn then(&self, next: &GeneratorImages) -> Result<GeneratorImages, GroupError> {
        if self.target_rank != next.source_rank {
            return Err(GroupError::RankMismatch {
                expected: next.source_rank,
                found: self.target_rank,
            });
        }
        let images = self
            .images
            .iter()
            .map(|w| substitute(w, next))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GeneratorImages {
            source_rank: self.source_rank,
            target_rank: next.target_rank,
            images,
        })
    }
}

/// Applies the homomorphism to a word.
pub fn substitute(w: &FreeWord, images: &GeneratorImages) -> Result<FreeWord, GroupError> {
    let mut out = Vec::new();
    for l in w.letters() {
        let image = images
            .images
            .get(l.generator)
            .ok_or(GroupError::GeneratorOutOfRange {
                generator: l.generator,
                rank: images.source_rank,
            })?;
        if l.inverse {
            out.extend(image.inverse().0);
        } else {
            out.extend_from_slice(&image.0);
        }
    }
    Ok(FreeWord::reduce(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn cancellation() {
        assert_eq!(&w("x0") * &w("x0^-1"), FreeWord::identity());
        assert_eq!(w("x0 x1 x1^-1 x0"), w("x0 x0"));
        assert_eq!(&w("x0 x1") * &w("x1^-1 x0^-1 x2"), w("x2"));
    }

    #[test]
    fn inverse_of_product() {
        assert_eq!(w("x0 x1").inverse(), w("x1^-1 x0^-1"));
        assert_eq!(w("x0 x1^-1 x2").inverse().inverse(), w("x0 x1^-1 x2"));
    }

    #[test]
    fn display_round_trip() {
        let word = w("x0 x1^-1 x0");
        assert_eq!(word.to_string(), "x0 x1^-1 x0");
        assert_eq!(word.to_string().parse::<FreeWord>().unwrap(), word);
        assert_eq!(w("1"), FreeWord::identity());
        assert!("y0".parse::<FreeWord>().is_err());
    }

    #[test]
    fn power() {
        assert_eq!(w("x0 x1").pow(2), w("x0 x1 x0 x1"));
        assert_eq!(w("x0").pow(-3), w("x0^-1 x0^-1 x0^-1"));
        assert_eq!(w("x0").pow(0), FreeWord::identity());
    }

    #[test]
    fn substitution_examples() {
        let id = GeneratorImages::identity(2);
        assert_eq!(substitute(&w("x0 x1"), &id).unwrap(), w("x0 x1"));
        let twist = GeneratorImages::new(2, vec![w("x1 x0"), w("x1")]).unwrap();
        assert_eq!(substitute(&w("x0 x1^-1"), &twist).unwrap(), w("x1 x0 x1^-1"));
        let square = GeneratorImages::new(1, vec![w("x0 x0")]).unwrap();
        assert_eq!(substitute(&w("x0^-1"), &square).unwrap(), w("x0^-1 x0^-1"));
        assert!(substitute(&w("x3"), &square).is_err());
    }

    #[test]
    fn composition_of_images() {
        let a = GeneratorImages::new(2, vec![w("x0 x1"), w("x1")]).unwrap();
        let b = GeneratorImages::new(1, vec![w("x0"), w("x0^-1")]).unwrap();
        let ab = a.then(&b).unwrap();
        assert_eq!(ab.images(), &[FreeWord::identity(), w("x0^-1")]);
    }
}
