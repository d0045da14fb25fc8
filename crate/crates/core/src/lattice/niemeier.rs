//! The Niemeier lattice N(A1^24), its index-2 sublattice Lambda_0 and the
//! Leech lattice as the rootless neighbor of N(A1^24) through Lambda_0.

use super::{EnumerationBudget, ScaledLattice};
use crate::codes::BinaryCode;
use crate::error::{Error, Result};

fn validate_code(code: &BinaryCode) -> Result<()> {
    if code.length() != 24 {
        return Err(Error::InvalidCode(format!("length {} is not 24", code.length())));
    }
    if !code.is_doubly_even() {
        return Err(Error::InvalidCode("code is not doubly even".into()));
    }
    Ok(())
}

fn word_vector(w: u64, value: i64) -> Vec<i64> {
    (0..24).map(|i| if w >> i & 1 == 1 { value } else { 0 }).collect()
}

/// N(A1^24) in the sqrt(2) frame: spanned by the roots `2 e_i` and the code
/// words as 0/1 vectors.
pub fn niemeier_a1_24(code: &BinaryCode) -> Result<ScaledLattice> {
    validate_code(code)?;
    let mut gens: Vec<Vec<i64>> = (0..24).map(|i| (0..24).map(|j| if i == j { 2 } else { 0 }).collect()).collect();
    gens.extend(code.generators().iter().map(|&w| word_vector(w, 1)));
    ScaledLattice::from_generators(2, &gens)
}

/// Kernel of a homomorphism `L -> Z/2` given on stored coordinates.
///
/// `parity` must be additive mod 2 on the lattice; it is only evaluated on
/// the basis, and the result is checked against it on the new basis.
pub fn index_two_kernel(lattice: &ScaledLattice, parity: impl Fn(&[i64]) -> bool) -> Result<ScaledLattice> {
    let basis = lattice.basis();
    let odd: Vec<usize> = (0..basis.len()).filter(|&i| parity(&basis[i])).collect();
    let Some(&p) = odd.first() else {
        return Ok(lattice.clone());
    };
    let mut gens = Vec::with_capacity(basis.len());
    for (i, b) in basis.iter().enumerate() {
        if i == p {
            gens.push(b.iter().map(|x| 2 * x).collect());
        } else if odd.contains(&i) {
            gens.push(b.iter().zip(&basis[p]).map(|(x, y)| x + y).collect());
        } else {
            gens.push(b.clone());
        }
    }
    let kernel = ScaledLattice::from_generators(lattice.scale(), &gens)?;
    if kernel.basis().iter().any(|b| parity(b)) {
        return Err(Error::Internal("parity map is not a homomorphism".into()));
    }
    Ok(kernel)
}

/// Lambda_0 in the sqrt(2) frame: vectors of N(A1^24) whose pairing with
/// (1,...,1)/sqrt(8) is an integer, i.e. coordinate sum divisible by 4.
pub fn lambda0(code: &BinaryCode) -> Result<ScaledLattice> {
    let n = niemeier_a1_24(code)?;
    // coordinate sums on N are even; the pairing is (sum x)/4
    index_two_kernel(&n, |x| x.iter().sum::<i64>().rem_euclid(4) != 0)
}

/// The Leech lattice in the sqrt(8) frame: Lambda_0 glued with (-3,1,...,1).
pub fn leech_lattice(code: &BinaryCode) -> Result<ScaledLattice> {
    let l0 = lambda0(code)?.rescaled(8)?;
    let mut gens = l0.basis().to_vec();
    let mut glue = vec![1i64; 24];
    glue[0] = -3;
    gens.push(glue);
    ScaledLattice::from_generators(8, &gens)
}

/// Membership in the Leech lattice from the explicit congruence conditions,
/// for a vector given in the sqrt(8) frame.
pub fn leech_membership(code: &BinaryCode, coords: &[i64]) -> bool {
    if coords.len() != 24 {
        return false;
    }
    let sum: i64 = coords.iter().sum();
    if sum.rem_euclid(4) != 0 {
        return false;
    }
    let m = sum / 4;
    let mut support = 0u64;
    for (i, &x) in coords.iter().enumerate() {
        if (x - m).rem_euclid(4) != 0 {
            if (x - m).rem_euclid(2) != 0 {
                return false;
            }
            support |= 1 << i;
        }
    }
    code.contains(support)
}

/// An even unimodular overlattice `L0 + Z gamma`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub glue: Vec<i64>,
    pub lattice: ScaledLattice,
}

/// All even unimodular lattices `L0 + Z gamma` for `gamma` running over the
/// nonzero classes of `L0^dual / L0`, which must be a Klein four-group.
pub fn even_unimodular_extensions(l0: &ScaledLattice) -> Result<Vec<Extension>> {
    let dual = l0.dual();
    let (base, dual) =
        l0.common_frame(&dual).ok_or_else(|| Error::Internal("lattice and dual share no frame".into()))?;

    let mut reps: Vec<Vec<i64>> = vec![vec![0; base.rank()]];
    let in_class = |a: &[i64], b: &[i64]| {
        let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        base.contains(&diff)
    };
    for g in dual.basis() {
        if reps.iter().any(|r| in_class(g, r)) {
            continue;
        }
        let new: Vec<Vec<i64>> = reps.iter().map(|r| r.iter().zip(g).map(|(x, y)| x + y).collect()).collect();
        reps.extend(new);
        if reps.len() > 4 {
            return Err(Error::NotKleinQuotient(format!("quotient has order > 4 ({}+)", reps.len())));
        }
    }
    if reps.len() != 4 {
        return Err(Error::NotKleinQuotient(format!("quotient has order {}", reps.len())));
    }
    for r in &reps {
        let twice: Vec<i64> = r.iter().map(|x| 2 * x).collect();
        if !base.contains(&twice) {
            return Err(Error::NotKleinQuotient("quotient has an element of order 4".into()));
        }
    }

    let mut out = Vec::new();
    for glue in reps.into_iter().skip(1) {
        let mut gens = base.basis().to_vec();
        gens.push(glue.clone());
        let lattice = ScaledLattice::from_generators(base.scale(), &gens)?.normalized();
        if lattice.is_even() && lattice.is_unimodular() {
            out.push(Extension { glue, lattice });
        }
    }
    Ok(out)
}

impl Extension {
    pub fn root_count(&self) -> Result<u64> {
        self.lattice.count_vectors_of_norm(2, EnumerationBudget::default())
    }
}

/// Index of `sub` in `sup` (both full rank), from the determinant ratio.
pub fn index_in(sub: &ScaledLattice, sup: &ScaledLattice) -> Option<u64> {
    use num_traits::ToPrimitive;
    let ratio = sub.determinant() / sup.determinant();
    if !ratio.is_integer() {
        return None;
    }
    let sq = ratio.to_integer().to_u64()?;
    let r = num_integer::Roots::sqrt(&sq);
    (r * r == sq).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::golay_code;

    #[test]
    fn niemeier_is_even_unimodular() {
        let n = niemeier_a1_24(&golay_code()).unwrap();
        assert!(n.is_even());
        assert!(n.is_unimodular());
        assert!(n.dual().same_points(&n));
    }

    #[test]
    fn leech_is_even_unimodular() {
        let l = leech_lattice(&golay_code()).unwrap();
        assert_eq!(l.scale(), 8);
        assert!(l.is_even());
        assert!(l.is_unimodular());
    }

    #[test]
    fn lambda0_has_index_two_in_both() {
        let code = golay_code();
        let l0 = lambda0(&code).unwrap();
        let n = niemeier_a1_24(&code).unwrap();
        let leech = leech_lattice(&code).unwrap();
        assert_eq!(index_in(&l0, &n), Some(2));
        let l0_8 = l0.rescaled(8).unwrap();
        assert_eq!(index_in(&l0_8, &leech), Some(2));
        assert!(l0_8.basis().iter().all(|b| leech.contains(b)));
    }

    #[test]
    fn membership_examples() {
        let code = golay_code();
        let mut glue = vec![1i64; 24];
        glue[0] = -3;
        assert!(leech_membership(&code, &glue));
        let mut v = vec![0i64; 24];
        v[0] = 4;
        v[1] = 4;
        assert!(leech_membership(&code, &v));
        let mut e = vec![0i64; 24];
        e[0] = 1;
        assert!(!leech_membership(&code, &e));
        let leech = leech_lattice(&code).unwrap();
        assert!(leech.contains(&glue) && leech.contains(&v) && !leech.contains(&e));
    }

    #[test]
    fn rejects_bad_codes() {
        let c = BinaryCode::span(24, [0b11]).unwrap();
        assert!(niemeier_a1_24(&c).is_err());
        let c = BinaryCode::span(16, [0b1111]).unwrap();
        assert!(leech_lattice(&c).is_err());
    }

    #[test]
    fn non_klein_quotient_rejected() {
        // Z with scale 1 scaled by 2: dual / L has order 4 but is cyclic
        let l = ScaledLattice::from_generators(1, &[vec![2]]).unwrap();
        assert!(matches!(even_unimodular_extensions(&l), Err(Error::NotKleinQuotient(_))));
    }
}
