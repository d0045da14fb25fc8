//! Binary linear codes over GF(2) and the extended Golay code.
//!
//! Codes are stored as generator matrices in reduced row echelon form with
//! the fixed column order 0, 1, 2, ... so that two codes are equal exactly
//! when their reduced generator lists are equal. Words of length at most 64
//! are packed into a `u64`, bit `i` holding coordinate `i`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest dimension `weight_enumerator` will enumerate exhaustively.
pub const MAX_ENUMERATION_DIMENSION: usize = 28;

/// Coordinate of the point at infinity in the 24-position index map.
pub const INFINITY: usize = 23;

/// A word of length 24 indexed by the projective line over F_23.
///
/// Positions `0..=22` are the residues mod 23, position 23 is infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Codeword(u32);

impl Codeword {
    pub const LENGTH: usize = 24;
    const MASK: u32 = (1 << 24) - 1;

    pub fn from_bits(bits: u32) -> Self {
        Codeword(bits & Self::MASK)
    }

    pub fn from_positions<I: IntoIterator<Item = usize>>(positions: I) -> Self {
        let mut bits = 0u32;
        for p in positions {
            assert!(p < Self::LENGTH, "position {p} out of range");
            bits ^= 1 << p;
        }
        Codeword(bits)
    }

    pub fn all_ones() -> Self {
        Codeword(Self::MASK)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn get(self, position: usize) -> bool {
        self.0 >> position & 1 == 1
    }

    pub fn positions(self) -> impl Iterator<Item = usize> {
        (0..Self::LENGTH).filter(move |&i| self.get(i))
    }
}

impl std::ops::BitXor for Codeword {
    type Output = Codeword;
    fn bitxor(self, rhs: Codeword) -> Codeword {
        Codeword(self.0 ^ rhs.0)
    }
}

impl From<Codeword> for u64 {
    fn from(w: Codeword) -> u64 {
        w.0 as u64
    }
}

/// A binary linear code held as a canonical reduced generator matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryCode {
    length: usize,
    rows: Vec<u64>,
}

fn pivot(row: u64) -> u32 {
    row.trailing_zeros()
}

impl BinaryCode {
    /// Span of `words` (any spanning set, dependent rows allowed).
    pub fn span(length: usize, words: impl IntoIterator<Item = u64>) -> Result<Self> {
        if length == 0 || length > 64 {
            return Err(Error::InvalidCode(format!("length {length} not in 1..=64")));
        }
        let mask = if length == 64 { u64::MAX } else { (1u64 << length) - 1 };
        let mut rows: Vec<u64> = Vec::new();
        for w in words {
            if w & !mask != 0 {
                return Err(Error::InvalidCode(format!("word {w:#x} has bits beyond length {length}")));
            }
            let mut w = w;
            for &r in &rows {
                if w >> pivot(r) & 1 == 1 {
                    w ^= r;
                }
            }
            if w != 0 {
                // keep the basis fully reduced against the new pivot
                let p = pivot(w);
                for r in rows.iter_mut() {
                    if *r >> p & 1 == 1 {
                        *r ^= w;
                    }
                }
                rows.push(w);
            }
        }
        rows.sort_by_key(|&r| pivot(r));
        Ok(BinaryCode { length, rows })
    }

    pub fn zero(length: usize) -> Result<Self> {
        Self::span(length, std::iter::empty())
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Reduced generators, sorted by pivot column.
    pub fn generators(&self) -> &[u64] {
        &self.rows
    }

    pub fn contains(&self, word: u64) -> bool {
        let mut w = word;
        for &r in &self.rows {
            if w >> pivot(r) & 1 == 1 {
                w ^= r;
            }
        }
        w == 0
    }

    /// Every codeword, in Gray-code order. Refuses dimensions above
    /// [`MAX_ENUMERATION_DIMENSION`].
    pub fn codewords(&self) -> Result<Vec<u64>> {
        let k = self.dimension();
        if k > MAX_ENUMERATION_DIMENSION {
            return Err(Error::EnumerationLimit { dimension: k, limit: MAX_ENUMERATION_DIMENSION });
        }
        let mut out = Vec::with_capacity(1 << k);
        let mut w = 0u64;
        out.push(w);
        for step in 1u64..(1u64 << k) {
            w ^= self.rows[step.trailing_zeros() as usize];
            out.push(w);
        }
        Ok(out)
    }

    pub fn weight_enumerator(&self) -> Result<BTreeMap<u32, u64>> {
        let k = self.dimension();
        if k > MAX_ENUMERATION_DIMENSION {
            return Err(Error::EnumerationLimit { dimension: k, limit: MAX_ENUMERATION_DIMENSION });
        }
        let mut counts = BTreeMap::new();
        let mut w = 0u64;
        *counts.entry(0).or_insert(0) += 1;
        for step in 1u64..(1u64 << k) {
            w ^= self.rows[step.trailing_zeros() as usize];
            *counts.entry(w.count_ones()).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// Smallest nonzero weight, `None` for the zero code.
    pub fn min_weight(&self) -> Result<Option<u32>> {
        Ok(self.weight_enumerator()?.keys().copied().find(|&w| w > 0))
    }

    /// A code is doubly even iff every generator has weight divisible by 4
    /// and all generators are pairwise orthogonal.
    pub fn is_doubly_even(&self) -> bool {
        let gens_ok = self.rows.iter().all(|r| r.count_ones() % 4 == 0);
        let orth =
            self.rows.iter().enumerate().all(|(i, a)| self.rows[i + 1..].iter().all(|b| (a & b).count_ones() % 2 == 0));
        gens_ok && orth
    }

    /// Kernel of the generator matrix.
    pub fn dual(&self) -> BinaryCode {
        let pivots: Vec<u32> = self.rows.iter().map(|&r| pivot(r)).collect();
        let mut words = Vec::with_capacity(self.length - self.dimension());
        for j in 0..self.length as u32 {
            if pivots.contains(&j) {
                continue;
            }
            let mut w = 1u64 << j;
            for (r, &p) in self.rows.iter().zip(&pivots) {
                if r >> j & 1 == 1 {
                    w |= 1u64 << p;
                }
            }
            words.push(w);
        }
        BinaryCode::span(self.length, words).expect("dual of a valid code is valid")
    }

    pub fn is_self_dual(&self) -> bool {
        self.dual() == *self
    }

    /// Text form: a `length dimension` header, then one 0/1 string per
    /// reduced generator.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.length, self.dimension());
        for &r in &self.rows {
            for j in 0..self.length {
                s.push(if r >> j & 1 == 1 { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next_num = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{what}: {e}")))
        };
        let length = next_num("length")?;
        let dimension = next_num("dimension")?;
        let rows: Vec<&str> = text.split_whitespace().skip(2).collect();
        if rows.len() != dimension {
            return Err(Error::Parse(format!("expected {dimension} rows, found {}", rows.len())));
        }
        let mut words = Vec::with_capacity(dimension);
        for row in rows {
            if row.len() != length {
                return Err(Error::Parse(format!("row {row:?} does not have length {length}")));
            }
            let mut w = 0u64;
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => w |= 1 << j,
                    _ => return Err(Error::Parse(format!("bad bit {c:?}"))),
                }
            }
            words.push(w);
        }
        let code = BinaryCode::span(length, words)?;
        if code.dimension() != dimension {
            return Err(Error::Parse("generator rows are linearly dependent".into()));
        }
        Ok(code)
    }
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Which point completes the eleven nonzero quadratic residues to a 12-set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrCompletion {
    Zero,
    Infinity,
}

impl fmt::Display for QrCompletion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QrCompletion::Zero => f.write_str("QR = nonzero squares mod 23 plus 0"),
            QrCompletion::Infinity => f.write_str("QR = nonzero squares mod 23 plus infinity"),
        }
    }
}

const P: usize = 23;

fn inv_mod(x: usize) -> usize {
    (1..P).find(|&y| x * y % P == 1).expect("23 is prime")
}

/// tau -> tau + 1 on the projective line.
fn shift(x: usize) -> usize {
    if x == INFINITY {
        INFINITY
    } else {
        (x + 1) % P
    }
}

/// tau -> -1/tau on the projective line.
fn negative_inverse(x: usize) -> usize {
    match x {
        INFINITY => 0,
        0 => INFINITY,
        _ => (P - inv_mod(x)) % P,
    }
}

fn map_word(w: u32, f: fn(usize) -> usize) -> u32 {
    (0..24).filter(|&i| w >> i & 1 == 1).fold(0, |acc, i| acc | 1 << f(i))
}

pub fn nonzero_squares_mod_23() -> Vec<usize> {
    let mut v: Vec<usize> = (1..P).map(|x| x * x % P).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Span of the orbit of `seed` under the group generated by the two
/// linear-fractional maps.
fn psl2_orbit_span(seed: u32) -> BinaryCode {
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![seed];
    seen.insert(seed);
    while let Some(w) = stack.pop() {
        for f in [shift as fn(usize) -> usize, negative_inverse] {
            let img = map_word(w, f);
            if seen.insert(img) {
                stack.push(img);
            }
        }
    }
    BinaryCode::span(24, seen.into_iter().map(u64::from)).expect("length 24 is valid")
}

/// The extended Golay code together with the completion of the residue set
/// that produced it.
pub fn golay_code_with_convention() -> Result<(BinaryCode, QrCompletion)> {
    let residues = nonzero_squares_mod_23();
    for (completion, extra) in [(QrCompletion::Zero, 0), (QrCompletion::Infinity, INFINITY)] {
        let seed = Codeword::from_positions(residues.iter().copied().chain([extra]));
        let code = psl2_orbit_span(seed.bits());
        if code.dimension() == 12 {
            return Ok((code, completion));
        }
    }
    Err(Error::Internal("neither residue completion spans a 12-dimensional code".into()))
}

pub fn golay_code() -> BinaryCode {
    golay_code_with_convention().expect("Golay construction is deterministic").0
}

/// Certified parameters of a doubly even self-dual length-24 code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GolayCertificate {
    pub dimension: usize,
    pub min_weight: u32,
    pub doubly_even: bool,
    pub self_dual: bool,
    pub weight_enumerator: BTreeMap<u32, u64>,
}

pub fn certify(code: &BinaryCode) -> Result<GolayCertificate> {
    let weight_enumerator = code.weight_enumerator()?;
    Ok(GolayCertificate {
        dimension: code.dimension(),
        min_weight: weight_enumerator.keys().copied().find(|&w| w > 0).unwrap_or(0),
        doubly_even: code.is_doubly_even(),
        self_dual: code.is_self_dual(),
        weight_enumerator,
    })
}
