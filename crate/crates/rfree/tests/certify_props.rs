mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rfree::ball::ball;
use rfree::certify::{certify_free_from_set, geometric_parameter, psi, CoeffSet};
use rfree::interval::Interval;
use rfree::matrix::QMatrix;
use rfree::norms::op_norm;
use rfree::oracle::cross_validate;
use rfree::search::{find_candidate, SearchParams};
use rfree::DEFAULT_PREC;

fn sanov_set(radius: u32) -> CoeffSet {
    let b = ball(&sanov_spec(), radius, 10_000).unwrap();
    CoeffSet::from_ball(&b, DEFAULT_PREC).unwrap()
}

#[test]
fn geometric_parameter_is_power_invariant() {
    let set = sanov_set(1);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..8 {
        let n = rng.random_range(4..=9i64);
        let g = very_proximal(2, n, 4, 2, &mut rng);
        let d1 = geometric_parameter(&g, &set, DEFAULT_PREC)
            .unwrap()
            .expect("nonempty set");
        for k in [2i64, 3] {
            let dk = geometric_parameter(&g.pow_i64(k).unwrap(), &set, DEFAULT_PREC)
                .unwrap()
                .expect("nonempty set");
            assert!(dk.overlaps(&d1), "D(g^{k}) disjoint from D(g)");
        }
    }
}

#[test]
fn psi_ignores_factors_from_the_one_parameter_subgroup() {
    let set = sanov_set(1);
    let a0 = diag_q(&[rat(4, 1), rat(1, 4)]);
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..20 {
        let g = random_unimodular(2, 5, 2, &mut rng);
        let base = psi(&g, &set, &a0, DEFAULT_PREC).unwrap().unwrap();
        let mut j = 0;
        while j == 0 {
            j = rng.random_range(-4..=4i64);
        }
        let shifted_g = g.mul(&a0.pow_i64(j).unwrap());
        let shifted = psi(&shifted_g, &set, &a0, DEFAULT_PREC).unwrap().unwrap();
        assert!(shifted.overlaps(&base), "psi moved under a0^{j}");
    }
}

#[test]
fn psi_is_lipschitz_in_left_perturbations() {
    let set = sanov_set(1);
    let a0 = diag_q(&[rat(4, 1), rat(1, 4)]);
    let four = Interval::from_i64(4);
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..50 {
        let g = random_unimodular(2, 4, 2, &mut rng);
        let psi_g = psi(&g, &set, &a0, DEFAULT_PREC).unwrap().unwrap();

        let entries: Vec<_> = (0..4).map(|_| rat(rng.random_range(-3..=3), 64)).collect();
        let e = QMatrix::from_vec(2, entries);
        let s = QMatrix::identity(2).add_entrywise(&e);
        let psi_sg = psi(&s.mul(&g), &set, &a0, DEFAULT_PREC).unwrap().unwrap();

        let e_norm = op_norm(&e, DEFAULT_PREC).unwrap();
        assert!(e_norm.hi_f64() < 0.5, "perturbation too large to test");
        // The blanket constant 4·e^{4r} with r the displacement radius of
        // the ball, taken verbatim rather than the sharper computed bound.
        let bound = four.mul(&set.lip_exp_bound).mul(&e_norm);
        let diff = (psi_sg.hi_f64() - psi_g.lo_f64())
            .abs()
            .max((psi_g.hi_f64() - psi_sg.lo_f64()).abs());
        assert!(
            diff <= bound.hi_f64() + 1e-12,
            "psi jumped by {diff}, allowed {}",
            bound.hi_f64()
        );
    }
}

#[test]
fn certificates_recompute_identically() {
    let set = sanov_set(1);
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let g = very_proximal(2, 12, 3, 1, &mut rng);
    let c1 = certify_free_from_set(&g, &set, None, DEFAULT_PREC).unwrap();
    let c2 = certify_free_from_set(&g, &set, None, DEFAULT_PREC).unwrap();
    assert_eq!(c1.certified, c2.certified);
    assert_eq!(c1.vacuous, c2.vacuous);
    assert_eq!(format!("{:?}", c1.c_g), format!("{:?}", c2.c_g));
    assert_eq!(format!("{:?}", c1.d), format!("{:?}", c2.d));
    assert_eq!(format!("{:?}", c1.threshold), format!("{:?}", c2.threshold));
    assert_eq!(format!("{:?}", c1.margin), format!("{:?}", c2.margin));
}

#[test]
fn certified_verdicts_survive_brute_force() {
    let spec = sanov_spec();
    let params = SearchParams {
        radius: 1,
        budget: 200,
        delta0: 0.25,
        t: rat(1 << 16, 1),
        seed: 4242,
        ball_cap: 10_000,
        prec: DEFAULT_PREC,
    };
    let out = find_candidate(&spec, &params).unwrap();
    let real = out.realization.expect("accepted configuration");
    let set = sanov_set(1);
    let cert = certify_free_from_set(&real.element, &set, None, DEFAULT_PREC).unwrap();
    assert!(cert.certified, "realized candidate failed certification");

    let cv = cross_validate(&cert, &set, 4, 2, 1_000_000).unwrap();
    assert!(cv.pass && !cv.vacuous);
    let report = cv.report.unwrap();
    assert!(report.complete);
    assert!(report.witness.is_none());
}
