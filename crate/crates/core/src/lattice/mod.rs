//! Integral lattices in scaled integer coordinates.
//!
//! A [`ScaledLattice`] with scale `s` stores integer vectors `x`; the point
//! they represent is `x / sqrt(s)`, so the pairing is `(x . y) / s`. Every
//! lattice keeps its basis in Hermite normal form (lower triangular, positive
//! diagonal, off-diagonal entries reduced into `[0, d_j)`), which makes the
//! basis canonical: two lattices with the same scale are the same point set
//! exactly when their bases are equal.

mod enumerate;
mod niemeier;

pub use enumerate::{EnumerationBudget, NormCounts, DEFAULT_BUDGET};
pub use niemeier::{
    even_unimodular_extensions, index_in, index_two_kernel, lambda0, leech_lattice, leech_membership, niemeier_a1_24,
    Extension,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A vector in a lattice frame together with its norm `(x . x) / s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    pub coords: Vec<i64>,
    pub scale: i64,
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>, scale: i64) -> Self {
        LatticeVector { coords, scale }
    }

    pub fn norm(&self) -> Ratio<i64> {
        Ratio::new(dot(&self.coords, &self.coords), self.scale)
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScaledLattice {
    scale: i64,
    basis: Vec<Vec<i64>>,
}

impl fmt::Debug for ScaledLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScaledLattice")
            .field("rank", &self.rank())
            .field("scale", &self.scale)
            .field("diagonal", &self.diagonal())
            .finish()
    }
}

/// Hermite normal form of the row lattice spanned by `rows` in `Z^n`.
///
/// Returns `None` when the rows do not span a rank-`n` lattice.
fn hermite_normal_form(n: usize, rows: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let mut active: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut basis: Vec<Option<Vec<i128>>> = vec![None; n];

    for col in (0..n).rev() {
        loop {
            active.retain(|r| r.iter().any(|&v| v != 0));
            let Some(p) = active
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| r[col].abs())
                .map(|(i, _)| i)
            else {
                break;
            };
            let pivot_row = active[p].clone();
            let mut done = true;
            for (i, r) in active.iter_mut().enumerate() {
                if i == p || r[col] == 0 {
                    continue;
                }
                let q = r[col].div_euclid(pivot_row[col]);
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
                if r[col] != 0 {
                    done = false;
                }
            }
            if done {
                let mut row = active.swap_remove(p);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                basis[col] = Some(row);
                break;
            }
        }
        basis[col].as_ref()?;
    }
    let mut basis: Vec<Vec<i128>> = basis.into_iter().map(Option::unwrap).collect();

    for col in (0..n).rev() {
        let d = basis[col][col];
        let pivot_row = basis[col].clone();
        for row in basis.iter_mut().skip(col + 1) {
            let q = row[col].div_euclid(d);
            if q != 0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
        }
    }
    Some(
        basis
            .into_iter()
            .map(|r| r.into_iter().map(|v| i64::try_from(v).expect("HNF entry fits in i64")).collect())
            .collect(),
    )
}

fn isqrt_exact(v: i64) -> Option<i64> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt().round() as i64;
    (r.saturating_sub(1)..=r + 1).find(|&t| t >= 0 && t * t == v)
}

impl ScaledLattice {
    /// The lattice spanned by `generators` (any full-rank spanning set) in the
    /// frame of scale `scale`.
    pub fn from_generators(scale: i64, generators: &[Vec<i64>]) -> Result<Self> {
        if scale <= 0 {
            return Err(Error::InvalidLattice(format!("scale {scale} must be positive")));
        }
        let n = generators.first().map(Vec::len).ok_or(Error::DegenerateLattice)?;
        if n == 0 || generators.iter().any(|g| g.len() != n) {
            return Err(Error::InvalidLattice("generator rows have inconsistent length".into()));
        }
        let basis = hermite_normal_form(n, generators).ok_or(Error::DegenerateLattice)?;
        Ok(ScaledLattice { scale, basis })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Basis rows in Hermite normal form; row `j` is zero beyond column `j`.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rank()).map(|j| self.basis[j][j]).collect()
    }

    pub fn gram_matrix(&self) -> Vec<Vec<Ratio<i64>>> {
        self.basis.iter().map(|a| self.basis.iter().map(|b| Ratio::new(dot(a, b), self.scale)).collect()).collect()
    }

    /// The Gram matrix as integers, if the lattice is integral.
    pub fn integer_gram(&self) -> Option<Vec<Vec<i64>>> {
        self.gram_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|g| g.is_integer().then(|| g.to_integer())).collect())
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.integer_gram().is_some()
    }

    pub fn is_even(&self) -> bool {
        match self.integer_gram() {
            Some(g) => (0..self.rank()).all(|i| g[i][i] % 2 == 0),
            None => false,
        }
    }

    /// Determinant of the Gram matrix: `(prod d_j)^2 / s^n`.
    pub fn determinant(&self) -> BigRational {
        let d: BigInt = self.diagonal().iter().map(|&x| BigInt::from(x)).product();
        let s = num_traits::pow(BigInt::from(self.scale), self.rank());
        BigRational::new(&d * &d, s)
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Coefficients of `coords` (same frame) in the HNF basis, if it is a
    /// lattice vector.
    pub fn solve(&self, coords: &[i64]) -> Option<Vec<i64>> {
        if coords.len() != self.rank() {
            return None;
        }
        let mut r = coords.to_vec();
        let mut c = vec![0i64; self.rank()];
        for j in (0..self.rank()).rev() {
            let d = self.basis[j][j];
            if r[j] % d != 0 {
                return None;
            }
            c[j] = r[j] / d;
            if c[j] != 0 {
                for (x, y) in r.iter_mut().zip(&self.basis[j]) {
                    *x -= c[j] * y;
                }
            }
        }
        Some(c)
    }

    pub fn contains(&self, coords: &[i64]) -> bool {
        self.solve(coords).is_some()
    }

    /// Membership for a vector given in a frame of a different scale.
    pub fn contains_scaled(&self, v: &LatticeVector) -> bool {
        // v.coords / sqrt(v.scale) = y / sqrt(self.scale)  =>  y = v.coords * sqrt(self.scale / v.scale)
        let ratio = Ratio::new(self.scale, v.scale);
        let (Some(n), Some(d)) = (isqrt_exact(*ratio.numer()), isqrt_exact(*ratio.denom())) else {
            return false;
        };
        if v.coords.iter().any(|x| (x * n) % d != 0) {
            return false;
        }
        let y: Vec<i64> = v.coords.iter().map(|x| x * n / d).collect();
        self.contains(&y)
    }

    /// The lattice re-expressed in the frame of scale `new_scale`, which must
    /// be a perfect-square multiple of the current scale.
    pub fn rescaled(&self, new_scale: i64) -> Result<ScaledLattice> {
        if new_scale % self.scale != 0 {
            return Err(Error::InvalidLattice(format!("scale {new_scale} is not a multiple of {}", self.scale)));
        }
        let t = isqrt_exact(new_scale / self.scale)
            .ok_or_else(|| Error::InvalidLattice(format!("scale ratio {} is not a square", new_scale / self.scale)))?;
        let rows: Vec<Vec<i64>> = self.basis.iter().map(|r| r.iter().map(|x| x * t).collect()).collect();
        ScaledLattice::from_generators(new_scale, &rows)
    }

    /// Smallest equivalent frame: divides out the largest `k` with `k` dividing
    /// every coordinate and `k^2` dividing the scale.
    pub fn normalized(&self) -> ScaledLattice {
        let g = self.basis.iter().flatten().fold(0i64, |g, &x| g.gcd(&x));
        let k = (1..=g.abs()).rev().find(|k| g % k == 0 && self.scale % (k * k) == 0).unwrap_or(1);
        if k == 1 {
            return self.clone();
        }
        let rows: Vec<Vec<i64>> = self.basis.iter().map(|r| r.iter().map(|x| x / k).collect()).collect();
        ScaledLattice::from_generators(self.scale / (k * k), &rows).expect("scaling keeps rank")
    }

    /// Both lattices expressed in a common frame, if one exists.
    pub fn common_frame(&self, other: &ScaledLattice) -> Option<(ScaledLattice, ScaledLattice)> {
        let l = self.scale.lcm(&other.scale);
        for m in 1..=self.scale.max(other.scale) {
            let s = l * m;
            if let (Ok(a), Ok(b)) = (self.rescaled(s), other.rescaled(s)) {
                return Some((a, b));
            }
        }
        None
    }

    /// Point-set equality, independent of the stored frame.
    pub fn same_points(&self, other: &ScaledLattice) -> bool {
        if self.rank() != other.rank() {
            return false;
        }
        match self.common_frame(other) {
            Some((a, b)) => a.basis == b.basis,
            None => false,
        }
    }

    /// `{ y : (x, y) in Z for all x in L }`, in an enlarged frame when needed.
    pub fn dual(&self) -> ScaledLattice {
        let n = self.rank();
        // rows y_i with y_i . b_j = s * delta_ij, i.e. Y = s * B^{-T}
        let inv = invert_lower_triangular(&self.basis);
        let s = BigRational::from_integer(BigInt::from(self.scale));
        let y: Vec<Vec<BigRational>> = (0..n).map(|i| (0..n).map(|j| &inv[j][i] * &s).collect()).collect();
        let k = y
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
            .to_i64()
            .expect("dual denominator fits in i64");
        let rows: Vec<Vec<i64>> = y
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| (v * BigRational::from_integer(BigInt::from(k))).to_integer().to_i64().unwrap())
                    .collect()
            })
            .collect();
        ScaledLattice::from_generators(self.scale * k * k, &rows)
            .expect("dual of a nondegenerate lattice is nondegenerate")
            .normalized()
    }

    /// Text form: `rank scale` header then one basis row per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rank(), self.scale);
        for row in &self.basis {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let nums: Vec<i64> = text
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<_>>()?;
        if nums.len() < 2 {
            return Err(Error::Parse("missing `rank scale` header".into()));
        }
        let (rank, scale) = (nums[0], nums[1]);
        if rank <= 0 {
            return Err(Error::Parse(format!("rank {rank} must be positive")));
        }
        let rank = rank as usize;
        if nums.len() != 2 + rank * rank {
            return Err(Error::Parse(format!("expected {} matrix entries, found {}", rank * rank, nums.len() - 2)));
        }
        let rows: Vec<Vec<i64>> = nums[2..].chunks(rank).map(<[i64]>::to_vec).collect();
        let lattice = ScaledLattice::from_generators(scale, &rows)?;
        Ok(lattice)
    }
}

#[allow(clippy::needless_range_loop)]
fn invert_lower_triangular(b: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = b.len();
    let mut inv = vec![vec![BigRational::zero(); n]; n];
    for col in 0..n {
        // solve B x = e_col by forward substitution
        for i in 0..n {
            let mut acc = if i == col { BigRational::one() } else { BigRational::zero() };
            for k in 0..i {
                if b[i][k] != 0 {
                    acc -= BigRational::from_integer(BigInt::from(b[i][k])) * &inv[k][col];
                }
            }
            inv[i][col] = acc / BigRational::from_integer(BigInt::from(b[i][i]));
        }
    }
    inv
}
