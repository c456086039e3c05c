//! Pell machinery for `x^2 - 10 y^2 = ±1` and the divisor classes it
//! produces on ten- and eleven-point blow-ups of the plane.
//!
//! The continued fraction of `sqrt(10)` is `[3; 6, 6, 6, ...]`; its
//! convergents `p_k / q_k` satisfy `p_k^2 - 10 q_k^2 = (-1)^(k+1)` and feed
//! three constructions:
//!
//! * `D_k = (d_k; m_k^10)` with `d_k = (p_{2k}-3)/2`, `m_k = (q_{2k}-1)/2`;
//! * the exact split `D_k = c_k F_k` with `F_k` primitive;
//! * `G_k = D_k + s_k E_11` on the eleven-point blow-up, where `s_k` is the
//!   least integer with `s_k^2 > D_k^2` and `gcd(s_k, c_k) = 1`, making
//!   `G_k` primitive with `G_k^2 < 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, IntersectionLattice};

/// A convergent of the continued fraction of `sqrt(10)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellRecord {
    /// Index, starting from the seed pair at -1.
    pub index: i64,
    pub p: BigInt,
    pub q: BigInt,
}

impl PellRecord {
    /// `p^2 - 10 q^2`, which is `(-1)^(index+1)`.
    pub fn norm(&self) -> BigInt {
        &self.p * &self.p - BigInt::from(10) * &self.q * &self.q
    }
}

/// The convergent `(p_k, q_k)`: seeds `(1, 0)` at -1 and `(3, 1)` at 0,
/// then `p_{k+1} = 3 p_k + 10 q_k`, `q_{k+1} = p_k + 3 q_k`.
pub fn convergent(index: i64) -> Result<PellRecord> {
    if index < -1 {
        return Err(Error::Parameter(format!(
            "convergent index must be >= -1, got {index}"
        )));
    }
    let (mut p, mut q) = (BigInt::one(), BigInt::zero());
    for _ in 0..(index + 1) {
        let np = BigInt::from(3) * &p + BigInt::from(10) * &q;
        let nq = p + BigInt::from(3) * q;
        p = np;
        q = nq;
    }
    Ok(PellRecord { index, p, q })
}

/// The class `D_k = (d_k; m_k^10)` on the ten-point blow-up, split exactly
/// as `c_k * F_k` with `F_k` primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellDivisor {
    pub index: u64,
    /// `d_k = (p_{2k} - 3) / 2`.
    pub degree: BigInt,
    /// `m_k = (q_{2k} - 1) / 2`.
    pub multiplicity: BigInt,
    /// `D_k` on `blowup(10)`.
    pub class: DivisorClass,
    /// `c_k`: `p_{k-1}` for odd `k`, `q_{k-1}` for even `k`.
    pub multiplier: BigInt,
    /// The primitive factor `F_k`: `(p_k; q_k^10)` for odd `k`,
    /// `(10 q_k; p_k^10)` for even `k`.
    pub primitive: DivisorClass,
}

/// Builds the `k`-th Pell divisor, `k >= 1` (the split degenerates at 0).
pub fn pell_divisor(index: u64) -> Result<PellDivisor> {
    if index == 0 {
        return Err(Error::Parameter(
            "Pell divisors are defined for index >= 1".into(),
        ));
    }
    let double = convergent(2 * index as i64)?;
    let two = BigInt::from(2);
    let degree: BigInt = (&double.p - BigInt::from(3)) / &two;
    let multiplicity: BigInt = (&double.q - BigInt::one()) / &two;

    let at_k = convergent(index as i64)?;
    let before = convergent(index as i64 - 1)?;
    let (multiplier, prim_degree, prim_mult) = if index % 2 == 1 {
        (before.p.clone(), at_k.p.clone(), at_k.q.clone())
    } else {
        (before.q.clone(), BigInt::from(10) * &at_k.q, at_k.p.clone())
    };

    let lattice = IntersectionLattice::blowup(10);
    let mut coords = vec![degree.clone()];
    coords.extend(std::iter::repeat_n(multiplicity.clone(), 10));
    let class = DivisorClass::integral(&lattice, coords)?;

    let mut prim_coords = vec![prim_degree];
    prim_coords.extend(std::iter::repeat_n(prim_mult, 10));
    let primitive = DivisorClass::integral(&lattice, prim_coords)?;

    // The split is an exact identity; a mismatch would be a bug.
    if class != primitive.scale_int(&multiplier) {
        return Err(Error::LemmaViolation(format!(
            "Pell split failed at index {index}"
        )));
    }
    if !primitive.is_primitive() {
        return Err(Error::LemmaViolation(format!(
            "Pell factor at index {index} is not primitive"
        )));
    }
    Ok(PellDivisor {
        index,
        degree,
        multiplicity,
        class,
        multiplier,
        primitive,
    })
}

/// `G_k = D_k + s_k E_11` on the eleven-point blow-up: primitive, of
/// negative self-intersection, with semi-effective order `c_k` *conditional
/// on the SHGH conjecture*.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativePellClass {
    pub index: u64,
    /// The class on `blowup(11)`; its eleventh multiplicity is `-s_k`.
    pub class: DivisorClass,
    /// Least `s` with `s^2 > D_k^2` and `gcd(s, c_k) = 1`.
    pub extra: BigInt,
    /// `G_k^2 = D_k^2 - s_k^2 < 0`.
    pub self_intersection: BigInt,
    /// The order claim `c_k`; conditional on SHGH, never unconditional.
    pub conditional_order: BigInt,
}

/// Builds `G_k` for `k >= 1`.
pub fn negative_pell_class(index: u64) -> Result<NegativePellClass> {
    let pd = pell_divisor(index)?;
    let d_square = pd.class.self_intersection().to_integer();
    // Least s with s^2 > D^2, bumped until coprime to the multiplier so the
    // combined class stays primitive.
    let mut s = d_square.sqrt() + BigInt::one();
    while &s * &s <= d_square || !s.gcd(&pd.multiplier).is_one() {
        s += BigInt::one();
    }
    let lattice = IntersectionLattice::blowup(11);
    let mut coords = vec![pd.degree.clone()];
    coords.extend(std::iter::repeat_n(pd.multiplicity.clone(), 10));
    coords.push(-s.clone());
    let class = DivisorClass::integral(&lattice, coords)?;
    let self_intersection = class.self_intersection().to_integer();
    if !self_intersection.is_negative() || !class.is_primitive() {
        return Err(Error::LemmaViolation(format!(
            "negative Pell class at index {index} violates its contract"
        )));
    }
    Ok(NegativePellClass {
        index,
        class,
        extra: s,
        self_intersection,
        conditional_order: pd.multiplier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int_rat;

    #[test]
    fn convergent_table() {
        let expected: [(i64, i64, i64); 8] = [
            (-1, 1, 0),
            (0, 3, 1),
            (1, 19, 6),
            (2, 117, 37),
            (3, 721, 228),
            (4, 4443, 1405),
            (5, 27379, 8658),
            (6, 168717, 53353),
        ];
        for (k, p, q) in expected {
            let r = convergent(k).unwrap();
            assert_eq!((r.p, r.q), (BigInt::from(p), BigInt::from(q)), "k={k}");
        }
        assert!(convergent(-2).is_err());
    }

    #[test]
    fn norm_alternates_through_large_indices() {
        for k in -1..=60i64 {
            let r = convergent(k).unwrap();
            let expected = if (k + 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(r.norm(), BigInt::from(expected), "k={k}");
        }
    }

    #[test]
    fn neighbor_identities() {
        // q_{k-1} = p_k - 3 q_k and p_{k-1} = 10 q_k - 3 p_k.
        for k in 0..=20i64 {
            let a = convergent(k).unwrap();
            let b = convergent(k - 1).unwrap();
            assert_eq!(b.q, &a.p - BigInt::from(3) * &a.q);
            assert_eq!(b.p, BigInt::from(10) * &a.q - BigInt::from(3) * &a.p);
        }
    }

    #[test]
    fn first_pell_divisors() {
        let d1 = pell_divisor(1).unwrap();
        assert_eq!(d1.class.to_string(), "(57;18^10)");
        assert_eq!(d1.multiplier, BigInt::from(3));
        assert_eq!(d1.primitive.to_string(), "(19;6^10)");
        assert_eq!(d1.class.self_intersection(), int_rat(9));
        assert_eq!(d1.primitive.self_intersection(), int_rat(1));

        let d2 = pell_divisor(2).unwrap();
        assert_eq!(d2.class.to_string(), "(2220;702^10)");
        assert_eq!(d2.multiplier, BigInt::from(6));
        assert_eq!(d2.primitive.to_string(), "(370;117^10)");
        assert_eq!(d2.class.self_intersection(), int_rat(360));
        assert_eq!(d2.primitive.self_intersection(), int_rat(10));

        let d3 = pell_divisor(3).unwrap();
        assert_eq!(d3.multiplier, BigInt::from(117));
        assert_eq!(d3.degree, BigInt::from(84357));
        let d4 = pell_divisor(4).unwrap();
        assert_eq!(d4.multiplier, BigInt::from(228));
        assert_eq!(d4.degree, BigInt::from(3203400));
        assert_eq!(d4.multiplicity, BigInt::from(1013004));

        assert!(pell_divisor(0).is_err());
    }

    #[test]
    fn split_and_growth_through_twenty() {
        let mut last_multiplier = BigInt::zero();
        for k in 1..=20u64 {
            let pd = pell_divisor(k).unwrap();
            // Split identity, primitivity, strict growth of the multiplier.
            assert_eq!(pd.class, pd.primitive.scale_int(&pd.multiplier));
            assert!(pd.primitive.is_primitive());
            assert!(pd.multiplier > last_multiplier, "k={k}");
            last_multiplier = pd.multiplier.clone();

            // (2 d + 3)^2 - 10 (2 m + 1)^2 = -1.
            let a = BigInt::from(2) * &pd.degree + BigInt::from(3);
            let b = BigInt::from(2) * &pd.multiplicity + BigInt::one();
            assert_eq!(&a * &a - BigInt::from(10) * &b * &b, BigInt::from(-1));

            // D^2 is the square p_{k-1}^2 for odd k and 10 q_{k-1}^2 for
            // even k; F^2 is 1 or 10 accordingly.
            let before = convergent(k as i64 - 1).unwrap();
            let d_square = pd.class.self_intersection().to_integer();
            let f_square = pd.primitive.self_intersection().to_integer();
            if k % 2 == 1 {
                assert_eq!(d_square, &before.p * &before.p);
                assert_eq!(f_square, BigInt::one());
            } else {
                assert_eq!(d_square, BigInt::from(10) * &before.q * &before.q);
                assert_eq!(f_square, BigInt::from(10));
            }
        }
    }

    #[test]
    fn negative_classes() {
        let g1 = negative_pell_class(1).unwrap();
        assert_eq!(g1.extra, BigInt::from(4));
        assert_eq!(g1.class.to_string(), "(57;18^10,-4)");
        assert_eq!(g1.self_intersection, BigInt::from(-7));
        assert_eq!(g1.conditional_order, BigInt::from(3));

        let g2 = negative_pell_class(2).unwrap();
        assert_eq!(g2.extra, BigInt::from(19));
        assert_eq!(g2.self_intersection, BigInt::from(-1));

        let g3 = negative_pell_class(3).unwrap();
        assert_eq!(g3.extra, BigInt::from(118));
        assert_eq!(g3.self_intersection, BigInt::from(-235));

        let g4 = negative_pell_class(4).unwrap();
        assert_eq!(g4.extra, BigInt::from(721));
        assert_eq!(g4.self_intersection, BigInt::from(-1));

        for k in 1..=12u64 {
            let g = negative_pell_class(k).unwrap();
            assert!(g.self_intersection.is_negative());
            assert!(g.class.is_primitive());
            // The coprimality bump: without it, gcd(s, c) could exceed 1.
            assert!(g.extra.gcd(&g.conditional_order).is_one());
        }
    }
}
