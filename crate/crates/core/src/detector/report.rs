use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::is_prime_u64;
use crate::ec_finite::{count_points, group_structure, local_membership, FpPoint, Limits, LocalMembership};
use crate::ec_rational::{reduce_point, CurveQ, PointQ};

use super::{prime_seed, DetectorConfig, DetectorError};

/// The data behind a verdict at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalReport {
    pub p: u64,
    pub n: u64,
    pub d1: u64,
    pub d2: u64,
    pub g1: FpPoint,
    pub g2: FpPoint,
    pub target: FpPoint,
    pub gens: Vec<FpPoint>,
    /// `(i, j)` with `target = i g1 + j g2`.
    pub target_coordinates: (u64, u64),
    pub gen_coordinates: Vec<(u64, u64)>,
    pub membership: LocalMembership,
}

/// Structure of `E(F_p)`, coordinates of every reduced point and the
/// membership outcome for `target` against `gens`.
pub fn local_report(
    curve: &CurveQ,
    target: &PointQ,
    gens: &[PointQ],
    p: u64,
    cfg: &DetectorConfig,
) -> Result<LocalReport, DetectorError> {
    if p < 3 || !is_prime_u64(p) || (curve.discriminant() % p).is_zero() {
        return Err(DetectorError::BadPrime { p });
    }
    if let Some(pt) = std::iter::once(target).chain(gens).find(|pt| !curve.contains(pt)) {
        return Err(DetectorError::InvalidInput(format!("{pt} is not on {curve}")));
    }
    let limits = Limits::default();
    let ep = curve.reduce(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(prime_seed(cfg.seed, p));
    let n = count_points(&ep, &mut rng, &limits)?;
    let s = group_structure(&ep, n, &mut rng, &limits)?;
    let rt = reduce_point(target, p);
    let rgens: Vec<FpPoint> = gens.iter().map(|g| reduce_point(g, p)).collect();
    let target_coordinates = s.coordinates(&ep, &rt, &limits)?;
    let gen_coordinates = rgens
        .iter()
        .map(|g| s.coordinates(&ep, g, &limits))
        .collect::<Result<Vec<_>, _>>()?;
    let membership = local_membership(&ep, &s, &rt, &rgens, &limits)?;
    Ok(LocalReport {
        p,
        n,
        d1: s.d1,
        d2: s.d2,
        g1: s.g1,
        g2: s.g2,
        target: rt,
        gens: rgens,
        target_coordinates,
        gen_coordinates,
        membership,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_prime_rejected() {
        let e = CurveQ::new(0, 17).unwrap();
        let cfg = DetectorConfig::default();
        for p in [2, 3, 17, 21] {
            assert!(matches!(
                local_report(&e, &PointQ::Infinity, &[], p, &cfg),
                Err(DetectorError::BadPrime { .. })
            ));
        }
    }

    #[test]
    fn structure_of_y2_x3_minus_x_mod_5() {
        let e = CurveQ::new(-1, 0).unwrap();
        let cfg = DetectorConfig::default();
        let r = local_report(&e, &PointQ::from_ints(0, 0), &[], 5, &cfg).unwrap();
        assert_eq!((r.n, r.d1, r.d2), (8, 2, 4));
        assert!(r.membership.is_unsolvable());
        assert_eq!(r, local_report(&e, &PointQ::from_ints(0, 0), &[], 5, &cfg).unwrap());
    }
}
