//! Fixed-length binary sequences and the parity machinery built on them.
//!
//! Positions are 1-indexed everywhere in the public API: `w.at(1)` is the
//! leftmost element, matching the usual `w(i)` notation. Internally a sequence
//! of length `r` is packed into a `u64` with position `i` stored at bit
//! `r - i`, so numeric order of equal-length sequences is lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Longest sequence that fits the packed representation.
pub const MAX_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("sequence length must be at least 1")]
    EmptySequence,
    #[error("sequence length {0} exceeds the maximum of {MAX_LEN}")]
    TooLong(usize),
    #[error("position {pos} is outside 1..={len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("element {0} is not a binary digit")]
    NotBinary(u8),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("cannot parse {0:?} as a sequence")]
    Parse(String),
}

/// Weight parity of a binary sequence. Weight 0 counts as even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_weight(weight: u32) -> Parity {
        if weight.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn opposite(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parity {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(SeqError::Parse(other.to_string())),
        }
    }
}

/// A binary sequence `w ∈ {0,1}^r` with `1 <= r <= 64`.
///
/// Equality and hashing are structural. `Ord` sorts by length first and then
/// lexicographically (0 < 1, leftmost position most significant), so any set
/// of equal-length sequences iterates in lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinarySeq {
    len: u8,
    bits: u64,
}

fn check_len(len: usize) -> Result<(), SeqError> {
    match len {
        0 => Err(SeqError::EmptySequence),
        l if l > MAX_LEN => Err(SeqError::TooLong(l)),
        _ => Ok(()),
    }
}

fn check_pos(pos: usize, len: usize) -> Result<(), SeqError> {
    if pos == 0 || pos > len {
        Err(SeqError::PositionOutOfRange { pos, len })
    } else {
        Ok(())
    }
}

impl BinarySeq {
    /// Builds a sequence from its elements in order `w(1), w(2), ...`.
    pub fn new(elements: &[u8]) -> Result<Self, SeqError> {
        check_len(elements.len())?;
        let mut bits = 0u64;
        for &e in elements {
            if e > 1 {
                return Err(SeqError::NotBinary(e));
            }
            bits = (bits << 1) | u64::from(e);
        }
        Ok(BinarySeq {
            len: elements.len() as u8,
            bits,
        })
    }

    pub fn zeros(len: usize) -> Result<Self, SeqError> {
        check_len(len)?;
        Ok(BinarySeq {
            len: len as u8,
            bits: 0,
        })
    }

    /// The sequence whose elements are the binary digits of `value`, most
    /// significant first. Bits of `value` above `len` are ignored.
    pub fn from_index(len: usize, value: u64) -> Result<Self, SeqError> {
        check_len(len)?;
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Ok(BinarySeq {
            len: len as u8,
            bits: value & mask,
        })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Always false; sequences have length at least 1.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Packed value: the sequence read as a binary number.
    pub fn index(&self) -> u64 {
        self.bits
    }

    fn shift(&self, pos: usize) -> usize {
        self.len() - pos
    }

    /// Element at 1-indexed position `pos`.
    pub fn at(&self, pos: usize) -> Result<u8, SeqError> {
        check_pos(pos, self.len())?;
        Ok(((self.bits >> self.shift(pos)) & 1) as u8)
    }

    pub fn elements(&self) -> Vec<u8> {
        (1..=self.len())
            .map(|p| ((self.bits >> self.shift(p)) & 1) as u8)
            .collect()
    }

    /// Number of 1 elements.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn parity(&self) -> Parity {
        Parity::of_weight(self.weight())
    }

    /// Complements the element at position `pos`.
    pub fn flip(&self, pos: usize) -> Result<BinarySeq, SeqError> {
        check_pos(pos, self.len())?;
        Ok(BinarySeq {
            len: self.len,
            bits: self.bits ^ (1u64 << self.shift(pos)),
        })
    }

    /// Replaces the element at position `pos` with `*`.
    pub fn mask(&self, pos: usize) -> Result<MaskedSeq, SeqError> {
        check_pos(pos, self.len())?;
        Ok(MaskedSeq {
            len: self.len,
            star: pos as u8,
            bits: self.bits & !(1u64 << self.shift(pos)),
        })
    }
}

impl fmt::Display for BinarySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.elements() {
            f.write_str(if e == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinarySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinarySeq({self})")
    }
}

impl FromStr for BinarySeq {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let elements = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(SeqError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        BinarySeq::new(&elements)
    }
}

/// A sequence over `{0, 1, *}` with exactly one `*`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaskedSeq {
    len: u8,
    star: u8,
    // the star position is always stored as 0
    bits: u64,
}

impl MaskedSeq {
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn star_position(&self) -> usize {
        self.star as usize
    }

    /// `Some(bit)` off the star position, `None` on it.
    pub fn at(&self, pos: usize) -> Result<Option<u8>, SeqError> {
        check_pos(pos, self.len())?;
        if pos == self.star_position() {
            Ok(None)
        } else {
            Ok(Some(((self.bits >> (self.len() - pos)) & 1) as u8))
        }
    }
}

impl fmt::Display for MaskedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 1..=self.len() {
            let c = match self.at(p).expect("position in range") {
                None => "*",
                Some(1) => "1",
                Some(_) => "0",
            };
            f.write_str(c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MaskedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MaskedSeq({self})")
    }
}

pub fn weight(w: &BinarySeq) -> u32 {
    w.weight()
}

pub fn flip(w: &BinarySeq, pos: usize) -> Result<BinarySeq, SeqError> {
    w.flip(pos)
}

pub fn mask(w: &BinarySeq, pos: usize) -> Result<MaskedSeq, SeqError> {
    w.mask(pos)
}

/// All length-`r` sequences of the given weight parity, in lexicographic
/// order. There are `2^(r-1)` of them.
pub fn enumerate_parity(r: usize, parity: Parity) -> Result<Vec<BinarySeq>, SeqError> {
    check_len(r)?;
    if r >= MAX_LEN {
        return Err(SeqError::TooLong(r));
    }
    Ok((0..1u64 << r)
        .filter(|v| Parity::of_weight(v.count_ones()) == parity)
        .map(|v| BinarySeq {
            len: r as u8,
            bits: v,
        })
        .collect())
}

/// Sequences of `enumerate_parity(r, parity)` whose element at `pos` is `h`.
pub fn subset_ih(r: usize, parity: Parity, pos: usize, h: u8) -> Result<Vec<BinarySeq>, SeqError> {
    if r < 2 {
        return Err(SeqError::PositionOutOfRange { pos, len: r });
    }
    check_pos(pos, r)?;
    if h > 1 {
        return Err(SeqError::NotBinary(h));
    }
    let all = enumerate_parity(r, parity)?;
    Ok(all
        .into_iter()
        .filter(|w| w.at(pos).map(|b| b == h).unwrap_or(false))
        .collect())
}

/// `{ w^{-pos} : w ∈ set }`; duplicates collapse.
pub fn masked_set(set: &[BinarySeq], pos: usize) -> Result<BTreeSet<MaskedSeq>, SeqError> {
    if let Some(first) = set.first() {
        if let Some(bad) = set.iter().find(|w| w.len() != first.len()) {
            return Err(SeqError::LengthMismatch(first.len(), bad.len()));
        }
    }
    set.iter().map(|w| w.mask(pos)).collect()
}

/// Lexicographic comparison of equal-length sequences.
pub fn lex_compare(a: &BinarySeq, b: &BinarySeq) -> Result<Ordering, SeqError> {
    if a.len() != b.len() {
        return Err(SeqError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.bits.cmp(&b.bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> BinarySeq {
        text.parse().unwrap()
    }

    // Oracle: every length-r string by brute force, filtered on character counts.
    fn brute_strings(r: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        for _ in 0..r {
            out = out
                .into_iter()
                .flat_map(|p| [format!("{p}0"), format!("{p}1")])
                .collect();
        }
        out
    }

    fn ones(text: &str) -> usize {
        text.chars().filter(|&c| c == '1').count()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight(&s("0000")), 0);
        assert_eq!(weight(&s("1011")), 3);
        assert_eq!(weight(&s("1001")), 2);
        assert_eq!(s("0000").parity(), Parity::Even);
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip(&s("1001"), 3).unwrap(), s("1011"));
        assert_eq!(flip(&s("0000"), 1).unwrap(), s("1000"));
        assert_eq!(
            flip(&s("0000"), 5),
            Err(SeqError::PositionOutOfRange { pos: 5, len: 4 })
        );
        assert!(flip(&s("0000"), 0).is_err());
    }

    #[test]
    fn mask_examples() {
        assert_eq!(mask(&s("1001"), 3).unwrap().to_string(), "10*1");
        assert_eq!(mask(&s("0000"), 1).unwrap().to_string(), "*000");
        assert_eq!(mask(&s("1111"), 4).unwrap().star_position(), 4);
        assert!(mask(&s("11"), 3).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(s("0110").to_string(), "0110");
        assert_eq!(s("0110").elements(), vec![0, 1, 1, 0]);
        assert!("".parse::<BinarySeq>().is_err());
        assert!("01a".parse::<BinarySeq>().is_err());
        assert_eq!(BinarySeq::new(&[0, 2]), Err(SeqError::NotBinary(2)));
        assert_eq!(BinarySeq::zeros(65), Err(SeqError::TooLong(65)));
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(enumerate_parity(1, Parity::Odd).unwrap(), vec![s("1")]);
        assert_eq!(enumerate_parity(1, Parity::Even).unwrap(), vec![s("0")]);
        assert_eq!(enumerate_parity(0, Parity::Even), Err(SeqError::EmptySequence));
    }

    #[test]
    fn enumerate_matches_brute_force() {
        for r in 1..=12 {
            for parity in [Parity::Even, Parity::Odd] {
                let want: Vec<String> = brute_strings(r)
                    .into_iter()
                    .filter(|t| Parity::of_weight(ones(t) as u32) == parity)
                    .collect();
                let got: Vec<String> = enumerate_parity(r, parity)
                    .unwrap()
                    .iter()
                    .map(|w| w.to_string())
                    .collect();
                assert_eq!(got, want, "r={r} {parity}");
                assert_eq!(got.len(), 1 << (r - 1));
            }
        }
        let even4 = enumerate_parity(4, Parity::Even).unwrap();
        assert_eq!(even4.len(), 8);
        for w in ["0000", "1100", "1111"] {
            assert!(even4.contains(&s(w)));
        }
    }

    #[test]
    fn subset_ih_examples() {
        let got: Vec<String> = subset_ih(4, Parity::Even, 2, 0)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(got, ["0000", "0011", "1001", "1010"]);

        let got: BTreeSet<String> = subset_ih(4, Parity::Odd, 2, 0)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        let want: BTreeSet<String> = ["1000", "0010", "0001", "1011"]
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(got, want);

        assert!(subset_ih(4, Parity::Even, 5, 0).is_err());
        assert!(subset_ih(4, Parity::Even, 1, 2).is_err());
        assert!(subset_ih(1, Parity::Even, 1, 0).is_err());
    }

    #[test]
    fn subset_ih_counts_by_brute_force() {
        for r in 2..=10 {
            for parity in [Parity::Even, Parity::Odd] {
                for i in 1..=r {
                    for h in 0..=1u8 {
                        let want = brute_strings(r)
                            .into_iter()
                            .filter(|t| Parity::of_weight(ones(t) as u32) == parity)
                            .filter(|t| t.as_bytes()[i - 1] == b'0' + h)
                            .count();
                        let got = subset_ih(r, parity, i, h).unwrap().len();
                        assert_eq!(got, want);
                        assert_eq!(got, 1 << (r - 2));
                    }
                }
            }
        }
    }

    #[test]
    fn masked_set_examples() {
        let one: Vec<String> = masked_set(&[s("0000")], 1)
            .unwrap()
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(one, ["*000"]);
        assert_eq!(
            masked_set(&[s("000"), s("0000")], 1),
            Err(SeqError::LengthMismatch(3, 4))
        );
    }

    #[test]
    fn masked_sets_agree_across_parities() {
        for r in 2..=10 {
            let even = enumerate_parity(r, Parity::Even).unwrap();
            let odd = enumerate_parity(r, Parity::Odd).unwrap();
            for i in 1..=r {
                let me = masked_set(&even, i).unwrap();
                let mo = masked_set(&odd, i).unwrap();
                assert_eq!(me, mo, "r={r} i={i}");
                assert_eq!(me.len(), 1 << (r - 1));
            }
        }
    }

    #[test]
    fn lex_compare_examples() {
        assert_eq!(lex_compare(&s("0011"), &s("0101")).unwrap(), Ordering::Less);
        assert_eq!(lex_compare(&s("0101"), &s("0101")).unwrap(), Ordering::Equal);
        assert!(lex_compare(&s("01"), &s("010")).is_err());

        // brute-force string sort of the subset must match
        let mut subset = subset_ih(4, Parity::Even, 2, 0).unwrap();
        subset.reverse();
        subset.sort_by(|a, b| lex_compare(a, b).unwrap());
        let mut texts: Vec<String> = subset.iter().map(|w| w.to_string()).collect();
        let sorted = {
            let mut t = texts.clone();
            t.sort();
            t
        };
        assert_eq!(texts, sorted);
        texts.dedup();
        assert_eq!(texts, ["0000", "0011", "1001", "1010"]);
    }

    #[test]
    fn flip_is_parity_changing_involution_exhaustive() {
        for r in 1..=10 {
            for v in 0..1u64 << r {
                let w = BinarySeq::from_index(r, v).unwrap();
                for i in 1..=r {
                    let f = w.flip(i).unwrap();
                    assert_eq!(f.flip(i).unwrap(), w);
                    assert_ne!(f.parity(), w.parity());
                    assert_eq!((f.weight() as i64 - w.weight() as i64).abs(), 1);
                    assert_eq!(f.mask(i).unwrap(), w.mask(i).unwrap());
                }
            }
        }
    }

    #[test]
    fn flip_maps_subsets_across_parities() {
        for r in 2..=8 {
            for i in 1..=r {
                for h in 0..=1u8 {
                    let from = subset_ih(r, Parity::Even, i, h).unwrap();
                    let to: BTreeSet<_> = subset_ih(r, Parity::Odd, i, 1 - h)
                        .unwrap()
                        .into_iter()
                        .collect();
                    let image: BTreeSet<_> = from.iter().map(|w| w.flip(i).unwrap()).collect();
                    assert_eq!(image, to);
                }
            }
        }
    }

    #[test]
    fn parity_classes_partition() {
        for r in 1..=10 {
            let even: BTreeSet<_> = enumerate_parity(r, Parity::Even).unwrap().into_iter().collect();
            let odd: BTreeSet<_> = enumerate_parity(r, Parity::Odd).unwrap().into_iter().collect();
            assert!(even.is_disjoint(&odd));
            assert_eq!(even.len() + odd.len(), 1 << r);
        }
    }
}
