//! Acceptance suite: one pass/fail line per criterion (visible with
//! `cargo test --test acceptance -- --nocapture`). Each criterion is
//! self-contained and returns a summary or a failure reason; the test
//! fails if any criterion does.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rfree::ball::ball;
use rfree::certify::{boost, certify_free_from_set, geometric_parameter, psi, CoeffSet};
use rfree::matrix::{parse_rat, GroupSpec};
use rfree::norms::op_norm;
use rfree::oracle::{brute_force_witness, cross_validate, mc_probability_check, McEvent};
use rfree::projective::{apply_point, dist_point_hyperplane, dist_points};
use rfree::proximal::{analyze_spectrum, att_rep_loci};
use rfree::search::{find_candidate, SearchParams};
use rfree::{Interval, QMatrix, DEFAULT_PREC};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

const PREC: u32 = DEFAULT_PREC;
const WORD_CAP: u128 = 100_000_000;
const BALL_CAP: usize = 1_000_000;

type Check = std::result::Result<String, String>;

fn lib<T>(r: rfree::Result<T>, ctx: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{ctx}: {e}"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn load_spec(name: &str) -> std::result::Result<GroupSpec, String> {
    lib(GroupSpec::load(&fixture(name)), name)
}

fn coeff_set(spec: &GroupSpec, radius: u32) -> std::result::Result<CoeffSet, String> {
    let b = lib(ball(spec, radius, BALL_CAP), "ball")?;
    let mut set = lib(CoeffSet::from_ball(&b, PREC), "coefficient set")?;
    set.spec_digest = Some(spec.digest());
    Ok(set)
}

fn qm(rows: &[&[&str]]) -> QMatrix {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
    QMatrix::from_string_rows(&rows).expect("literal matrix")
}

fn elementary(dim: usize, i: usize, j: usize, off: i64) -> QMatrix {
    let mut rows = vec![vec!["0".to_string(); dim]; dim];
    for (k, row) in rows.iter_mut().enumerate() {
        row[k] = "1".into();
    }
    rows[i][j] = off.to_string();
    QMatrix::from_string_rows(&rows).expect("elementary matrix")
}

fn random_unimodular(dim: usize, steps: usize, max_off: i64, rng: &mut ChaCha8Rng) -> QMatrix {
    let mut m = QMatrix::identity(dim);
    for _ in 0..steps {
        let i = rng.random_range(0..dim);
        let mut j = rng.random_range(0..dim - 1);
        if j >= i {
            j += 1;
        }
        let mut off = rng.random_range(-max_off..=max_off);
        if off == 0 {
            off = 1;
        }
        m = m.mul(&elementary(dim, i, j, off));
    }
    m
}

/// B * diag(n, 1, ..., 1/n) * B^-1 for a random small integer basis B.
fn very_proximal(
    dim: usize,
    n: i64,
    steps: usize,
    max_off: i64,
    rng: &mut ChaCha8Rng,
) -> QMatrix {
    let b = random_unimodular(dim, steps, max_off, rng);
    let top = n.to_string();
    let bottom = format!("1/{n}");
    let diag = match dim {
        2 => qm(&[&[&top, "0"], &["0", &bottom]]),
        3 => qm(&[&[&top, "0", "0"], &["0", "1", "0"], &["0", "0", &bottom]]),
        _ => unreachable!("dims 2 and 3 only"),
    };
    b.mul(&diag).mul(&b.inverse().expect("unimodular basis"))
}

fn run_bin(args: &[&str]) -> std::result::Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_rfree"))
        .args(args)
        .output()
        .map_err(|e| format!("binary launch: {e}"))
}

fn certify_and_cross_validate(
    g: &QMatrix,
    set: &CoeffSet,
    label: &str,
) -> std::result::Result<bool, String> {
    let cert = lib(certify_free_from_set(g, set, None, PREC), label)?;
    if !cert.certified {
        return Ok(false);
    }
    let cv = lib(cross_validate(&cert, set, 6, 3, WORD_CAP), label)?;
    let report = cv.report.as_ref().ok_or_else(|| format!("{label}: no report"))?;
    if !cv.pass {
        return Err(format!(
            "{label}: certified element refuted by witness {}",
            report.witness.as_ref().map(|w| w.to_text()).unwrap_or_default()
        ));
    }
    if !report.complete {
        return Err(format!("{label}: cross-validation did not exhaust its budget"));
    }
    Ok(true)
}

/// Soundness: at least 20 certificates across d in {2,3}, every one
/// cross-validated by exhaustive search at budgets (6,3) with no witness.
/// Exhausting (6,3) costs about 35k words on the radius-1 Sanov set but
/// 2.0M on radius 2 and 852k on the SL3 set, so the composition leans on
/// the small set to stay inside the ten minute target.
fn criterion_soundness() -> Check {
    let start = Instant::now();
    let sanov = load_spec("sanov.json")?;
    let sl3 = load_spec("sl3_elem.json")?;
    let set1 = coeff_set(&sanov, 1)?;
    let set2 = coeff_set(&sanov, 2)?;
    let set3 = coeff_set(&sl3, 1)?;
    let mut by_dim = [0usize; 2];

    // Search-realized elements against the radius-1 Sanov set.
    let t = lib(parse_rat("65536"), "t")?;
    for seed in 1..=8u64 {
        let params = SearchParams {
            radius: 1,
            budget: 200,
            delta0: 0.5,
            t: t.clone(),
            seed,
            ball_cap: BALL_CAP,
            prec: PREC,
        };
        let outcome = lib(find_candidate(&sanov, &params), "search")?;
        let real = outcome
            .realization
            .ok_or_else(|| format!("seed {seed}: search found no realizable configuration"))?;
        if !certify_and_cross_validate(&real.element, &set1, &format!("realized seed {seed}"))? {
            return Err(format!("seed {seed}: realized element was not certified"));
        }
        by_dim[0] += 1;
    }

    // Integer-basis conjugates of diag(t, ..., 1/t) against each set.
    // Conjugators with entries this small rarely clear the radius-2 and
    // SL3 thresholds, hence the generous attempt caps in front of fixed
    // quotas; the seeds below settle each quota well inside its cap.
    let quotas: [(&CoeffSet, usize, usize, i64, usize, usize, u64, &str); 3] = [
        (&set1, 2, 3, 1, 10, 60, 6001, "d=2 r=1"),
        (&set2, 2, 3, 1, 1, 60, 7001, "d=2 r=2"),
        (&set3, 3, 5, 3, 1, 120, 7002, "d=3 r=1"),
    ];
    for (set, dim, steps, off, want, cap, seed, label) in quotas {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0usize;
        for attempt in 0..cap {
            if done == want {
                break;
            }
            let g = very_proximal(dim, 65536, steps, off, &mut rng);
            if certify_and_cross_validate(&g, set, &format!("{label} attempt {attempt}"))? {
                done += 1;
                by_dim[dim - 2] += 1;
            }
        }
        if done < want {
            return Err(format!("only {done}/{want} {label} conjugates certified"));
        }
    }

    let total = by_dim[0] + by_dim[1];
    let secs = start.elapsed().as_secs_f64();
    if total < 20 || by_dim[0] == 0 || by_dim[1] == 0 {
        return Err(format!(
            "{total} certificates ({} in d=2, {} in d=3), need 20 across both dimensions",
            by_dim[0], by_dim[1]
        ));
    }
    if secs > 600.0 {
        return Err(format!("runtime {secs:.0}s exceeds the 10 minute target"));
    }
    Ok(format!(
        "{total} certificates ({} d=2: 8 realized r=1, 10 conjugate r=1, 1 conjugate r=2; \
         {} d=3 conjugate), all cross-validated at budgets (6,3) with zero witnesses, {secs:.0}s",
        by_dim[0], by_dim[1]
    ))
}

/// Trivial negatives: every noncentral ball element fails certification
/// against its own ball (refusal or an exact D = 0 enclosure), and the
/// oracle finds its 2-syllable witness.
fn criterion_trivial_negative() -> Check {
    let sanov = load_spec("sanov.json")?;
    let sl3 = load_spec("sl3_elem.json")?;
    let cases = [(&sanov, 1u32), (&sanov, 2), (&sl3, 1)];
    let mut refused = 0usize;
    let mut zero_d = 0usize;
    let mut witnesses = 0usize;
    for (spec, radius) in cases {
        let set = coeff_set(spec, radius)?;
        for el in set.elements.clone() {
            let label = format!("{} (r={radius})", el.text);
            match certify_free_from_set(&el.matrix, &set, None, PREC) {
                Err(rfree::Error::NotVeryProximal) => refused += 1,
                Err(e) => return Err(format!("{label}: unexpected refusal {e}")),
                Ok(cert) => {
                    if cert.certified {
                        return Err(format!("{label}: certified against its own ball"));
                    }
                    if !cert.element_in_set {
                        return Err(format!("{label}: in-set flag missing"));
                    }
                    let d = cert.d.ok_or_else(|| format!("{label}: no D"))?;
                    if d.lo_f64() != 0.0 {
                        return Err(format!(
                            "{label}: D lower endpoint {} is not exactly zero",
                            d.lo_f64()
                        ));
                    }
                    zero_d += 1;
                }
            }

            let g_inv = lib(el.matrix.inverse(), &label)?;
            let expected = set
                .elements
                .iter()
                .find_map(|h| {
                    if h.matrix == el.matrix {
                        Some(format!("{}*x^-1", h.text))
                    } else if h.matrix == g_inv {
                        Some(format!("{}*x", h.text))
                    } else {
                        None
                    }
                })
                .ok_or_else(|| format!("{label}: element missing from its own set"))?;
            let report = lib(
                brute_force_witness(&el.matrix, &set, 2, 1, WORD_CAP),
                &label,
            )?;
            let witness = report
                .witness
                .ok_or_else(|| format!("{label}: no witness found"))?;
            if witness.syllable_count() != 2 {
                return Err(format!(
                    "{label}: witness {} has {} syllables",
                    witness.to_text(),
                    witness.syllable_count()
                ));
            }
            if witness.to_text() != expected {
                return Err(format!(
                    "{label}: witness {} differs from the expected {expected}",
                    witness.to_text()
                ));
            }
            witnesses += 1;
        }
    }
    Ok(format!(
        "{} ball elements: {refused} not-very-proximal refusals, {zero_d} exact D = 0 \
         certificates, {witnesses} two-syllable witnesses",
        refused + zero_d
    ))
}

/// Algebraic identities of the certificate criterion on 200 random very
/// proximal matrices (100 in each dimension).
fn criterion_algebra() -> Check {
    let sanov = load_spec("sanov.json")?;
    let sl3 = load_spec("sl3_elem.json")?;
    let set2 = coeff_set(&sanov, 1)?;
    let set3 = coeff_set(&sl3, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let mut checked = 0usize;
    for dim in [2usize, 3] {
        let set = if dim == 2 { &set2 } else { &set3 };
        for i in 0..100 {
            let n = rng.random_range(2..9);
            let steps = rng.random_range(1..4);
            let g = very_proximal(dim, n, steps, 1, &mut rng);
            let label = format!("d={dim} #{i}");
            let g2 = g.mul(&g);

            let spec_g = lib(analyze_spectrum(&g, PREC), &label)?;
            let spec_g2 = lib(analyze_spectrum(&g2, PREC), &label)?;
            let c = spec_g.c_g.ok_or_else(|| format!("{label}: no C_g"))?;
            let c2 = spec_g2.c_g.ok_or_else(|| format!("{label}: no C_g2"))?;
            let c_sq = c.mul(&c);
            if c2.rel_width_f64() > 1e-20 || c_sq.rel_width_f64() > 1e-20 {
                return Err(format!(
                    "{label}: contraction enclosures too wide ({:.2e}, {:.2e})",
                    c2.rel_width_f64(),
                    c_sq.rel_width_f64()
                ));
            }
            if !c2.overlaps(&c_sq) {
                return Err(format!("{label}: C_g2 and C_g^2 do not overlap"));
            }

            let h = random_unimodular(dim, 2, 1, &mut rng);
            let conj = h.mul(&g).mul(&lib(h.inverse(), &label)?);
            let loci_g = lib(att_rep_loci(&g, PREC), &label)?;
            let loci_c = lib(att_rep_loci(&conj, PREC), &label)?;
            let transported = apply_point(&h.to_interval(PREC), &loci_g.att);
            let datt = dist_points(&transported, &loci_c.att);
            if datt.hi_f64() > 1e-10 {
                return Err(format!(
                    "{label}: transported attractor off by {:.2e}",
                    datt.hi_f64()
                ));
            }

            let incidence = dist_point_hyperplane(&loci_g.att, &loci_g.rep_inv_normal);
            if incidence.hi_f64() > 1e-10 {
                return Err(format!(
                    "{label}: Att(g) misses Rep(g^-1) by {:.2e}",
                    incidence.hi_f64()
                ));
            }

            let d_g = lib(geometric_parameter(&g, set, PREC), &label)?
                .ok_or_else(|| format!("{label}: vacuous D"))?;
            let d_g2 = lib(geometric_parameter(&g2, set, PREC), &label)?
                .ok_or_else(|| format!("{label}: vacuous D for g^2"))?;
            if !d_g.overlaps(&d_g2) {
                return Err(format!("{label}: D(g) and D(g^2) do not overlap"));
            }
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} random very proximal matrices: C_g2 = C_g^2 at 1e-20 relative width, \
         attractor transport and incidence within 1e-10, D(g^2) = D(g) overlapping"
    ))
}

/// psi invariance under the one-parameter subgroup and its Lipschitz
/// bound in left perturbations.
fn criterion_psi() -> Check {
    let sanov = load_spec("sanov.json")?;
    let set = coeff_set(&sanov, 1)?;
    let a0 = qm(&[&["4", "0"], &["0", "1/4"]]);
    let mut rng = ChaCha8Rng::seed_from_u64(4004);

    for i in 0..100 {
        let g = random_unimodular(2, rng.random_range(1..5), 2, &mut rng);
        let mut j = rng.random_range(-2i64..=2);
        if j == 0 {
            j = 1;
        }
        let ga = g.mul(&lib(a0.pow_i64(j), "a0 power")?);
        let p1 = lib(psi(&g, &set, &a0, PREC), "psi")?
            .ok_or_else(|| "vacuous psi".to_string())?;
        let p2 = lib(psi(&ga, &set, &a0, PREC), "psi")?
            .ok_or_else(|| "vacuous psi".to_string())?;
        if !p1.overlaps(&p2) {
            return Err(format!("pair {i}: psi(g a0^{j}) does not overlap psi(g)"));
        }
    }

    let four = Interval::from_i64(4).with_prec(PREC);
    let mut max_ratio = 0.0f64;
    for i in 0..500 {
        let g = random_unimodular(2, rng.random_range(1..4), 2, &mut rng);
        let mut rows = vec![vec![String::new(); 2]; 2];
        for r in rows.iter_mut() {
            for cell in r.iter_mut() {
                let k = rng.random_range(-7i64..=7);
                *cell = format!("{k}/64");
            }
        }
        let e = QMatrix::from_string_rows(&rows).expect("perturbation");
        let s = QMatrix::identity(2).add_entrywise(&e);
        let sg = s.mul(&g);
        let p = lib(psi(&g, &set, &a0, PREC), "psi")?
            .ok_or_else(|| "vacuous psi".to_string())?;
        let ps = lib(psi(&sg, &set, &a0, PREC), "psi")?
            .ok_or_else(|| "vacuous psi".to_string())?;
        let diff = ps.sub(&p);
        let observed = diff.hi_f64().abs().max(diff.lo_f64().abs());
        let bound = four
            .mul(&set.lip_exp_bound)
            .mul(&lib(op_norm(&e, PREC), "op norm")?);
        if observed > bound.hi_f64() + 1e-12 {
            return Err(format!(
                "perturbation {i}: |psi(sg) - psi(g)| = {observed:.3e} exceeds 4 e^(4r) |s-1| = {:.3e}",
                bound.hi_f64()
            ));
        }
        if bound.hi_f64() > 0.0 {
            max_ratio = max_ratio.max(observed / bound.hi_f64());
        }
    }
    Ok(format!(
        "100 A-invariance pairs overlap; 500 perturbations obey the Lipschitz bound \
         (worst observed/bound ratio {max_ratio:.3})"
    ))
}

/// Monte Carlo scaling checks with a closed-form anchor in dimension 2.
fn criterion_mc() -> Check {
    let start = Instant::now();
    let t2 = lib(
        mc_probability_check(
            &McEvent::Tubular {
                dim: 2,
                subspace_dim: 1,
            },
            &[0.1, 0.01, 0.001],
            1_000_000,
            41,
            PREC,
        ),
        "d=2 tubular",
    )?;
    for row in &t2.rows {
        let cf = row
            .closed_form
            .ok_or_else(|| "d=2 tubular row lacks its closed form".to_string())?;
        if (row.p_hat - cf).abs() > 3.0 * row.std_err + 1e-12 {
            return Err(format!(
                "d=2 tubular eps={}: p_hat {:.6e} vs (2/pi) asin(eps) {:.6e} beyond 3 sigma",
                row.epsilon, row.p_hat, cf
            ));
        }
    }
    if !t2.closed_form_ok {
        return Err("d=2 tubular closed-form flag is false".into());
    }
    let closed_secs = start.elapsed().as_secs_f64();
    if closed_secs > 60.0 {
        return Err(format!(
            "closed-form check took {closed_secs:.0}s, target is under a minute"
        ));
    }

    let t3 = lib(
        mc_probability_check(
            &McEvent::Tubular {
                dim: 3,
                subspace_dim: 2,
            },
            &[0.2, 0.1, 0.05, 0.02, 0.01, 0.005],
            200_000,
            42,
            PREC,
        ),
        "d=3 tubular",
    )?;
    if !t3.validation_ok {
        return Err("d=3 tubular held-out rows violate the fitted c*eps bound".into());
    }
    if !t3.closed_form_ok {
        return Err("d=3 tubular closed-form flag is false".into());
    }

    let h = qm(&[&["2", "0", "0"], &["0", "1", "0"], &["0", "0", "1/2"]]);
    let fp = lib(
        mc_probability_check(
            &McEvent::FlagPairing { h },
            &[0.3, 0.2, 0.1, 0.05, 0.02, 0.01],
            200_000,
            43,
            PREC,
        ),
        "flag pairing",
    )?;
    if !fp.validation_ok {
        return Err("flag-pairing held-out rows violate the fitted c*eps^(1/4) bound".into());
    }
    Ok(format!(
        "d=2 tubular matches (2/pi) asin(eps) at 3 sigma for eps in {{0.1, 0.01, 0.001}} \
         ({closed_secs:.1}s); d=3 tubular and flag-pairing validated on held-out grid halves"
    ))
}

/// End-to-end: seed-fixed search, exact realization, certification, and
/// brute-force cross-validation on the Sanov spec at radius 1.
fn criterion_pipeline() -> Check {
    let start = Instant::now();
    let sanov = load_spec("sanov.json")?;
    let set = coeff_set(&sanov, 1)?;
    let params = SearchParams {
        radius: 1,
        budget: 10_000,
        delta0: 0.5,
        t: lib(parse_rat("65536"), "t")?,
        seed: 20_260_816,
        ball_cap: BALL_CAP,
        prec: PREC,
    };
    let outcome = lib(find_candidate(&sanov, &params), "search")?;
    if outcome.accepted_count == 0 {
        return Err("no accepted configuration in 10000 samples".into());
    }
    let score = outcome
        .best_score
        .as_ref()
        .ok_or_else(|| "winner has no interval score".to_string())?;
    if score.lo_f64() <= 0.0 {
        return Err(format!("winner score {} is not positive", score.lo_f64()));
    }
    let real = outcome
        .realization
        .as_ref()
        .ok_or_else(|| "winner was not realized".to_string())?;
    let cert = lib(
        certify_free_from_set(&real.element, &set, None, PREC),
        "certify",
    )?;
    if !cert.certified {
        return Err("realized element failed certification against B(1)".into());
    }
    let cv = lib(cross_validate(&cert, &set, 6, 3, WORD_CAP), "cross-validation")?;
    let report = cv.report.as_ref().ok_or_else(|| "no report".to_string())?;
    if !cv.pass || !report.complete {
        return Err("cross-validation failed or was incomplete".into());
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 300.0 {
        return Err(format!("pipeline took {secs:.0}s, target is under 5 minutes"));
    }
    Ok(format!(
        "search (10000 samples, {} accepted) -> realization (drift {:.1e}) -> certified \
         (margin {}) -> {} words exhausted with no witness, {secs:.0}s",
        outcome.accepted_count,
        real.drift,
        cert.margin
            .as_ref()
            .map(|m| format!("{:.3e}", m.lo_f64()))
            .unwrap_or_default(),
        report.words_checked
    ))
}

/// Boost arithmetic: the worked q = ceil((5 + kappa)/log C) example and
/// exact contraction powers of the boosted elements.
fn criterion_boost() -> Check {
    let a0 = qm(&[&["4", "0", "0"], &["0", "1", "0"], &["0", "0", "1/4"]]);
    let rot = qm(&[
        &["3/5", "0", "-4/5"],
        &["0", "1", "0"],
        &["4/5", "0", "3/5"],
    ]);
    let rot_inv = lib(rot.inverse(), "rot13 inverse")?;
    let set = lib(
        CoeffSet::from_elements(
            vec![("rot13".into(), rot), ("rot13^-1".into(), rot_inv)],
            PREC,
        ),
        "coefficient set",
    )?;
    let four = Interval::from_i64(4).with_prec(PREC);
    let gammas = [
        ("identity", QMatrix::identity(3)),
        ("e12", elementary(3, 0, 1, 1)),
    ];
    let mut lines = Vec::new();
    for (name, gamma) in &gammas {
        for radius in [1u32, 2] {
            let label = format!("gamma = {name}, r = {radius}");
            let psi_v = lib(psi(gamma, &set, &a0, PREC), &label)?
                .ok_or_else(|| format!("{label}: vacuous psi"))?;
            let (_, cert) = lib(
                boost(gamma, &a0, &set, radius, 1.0, &psi_v, PREC),
                &label,
            )?;
            let trace = cert
                .boost_trace
                .as_ref()
                .ok_or_else(|| format!("{label}: missing boost trace"))?;
            if trace.q != 5 {
                return Err(format!(
                    "{label}: q = {} instead of the worked value 5",
                    trace.q
                ));
            }
            if trace.exponent != 10 * radius as u64 {
                return Err(format!("{label}: exponent {} is not 2qr", trace.exponent));
            }
            let expected = four.powi(trace.exponent as i64);
            if !cert.c_g.contains(&expected) {
                return Err(format!(
                    "{label}: contraction enclosure misses 4^{}",
                    trace.exponent
                ));
            }
            if cert.c_g.rel_width_f64() > 1e-20 {
                return Err(format!(
                    "{label}: contraction enclosure wider than 1e-20 relative"
                ));
            }
            if !cert.certified {
                return Err(format!("{label}: boosted certificate not certified"));
            }
            lines.push(format!("{name} r={radius} C=4^{}", trace.exponent));
        }
    }
    Ok(format!(
        "kappa = 1, C(a0) = 4 gives q = 5 exactly; boosted enclosures contain the exact \
         powers ({}) at 1e-20 relative width",
        lines.join(", ")
    ))
}

/// Determinism of the shipped binary: same-seed reruns are bitwise
/// identical and worker count never changes artifact bytes.
fn criterion_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = fixture("sanov.json").display().to_string();

    let search_out = |name: &str| dir.path().join(name).display().to_string();
    let mut bytes = Vec::new();
    for name in ["s1.json", "s2.json"] {
        let out = search_out(name);
        let o = run_bin(&[
            "search", "--spec", &spec, "--radius", "1", "--seed", "31337", "--samples",
            "2000", "--out", &out,
        ])?;
        if o.status.code() != Some(0) {
            return Err(format!(
                "search exit {:?}: {}",
                o.status.code(),
                String::from_utf8_lossy(&o.stderr)
            ));
        }
        let trace = Path::new(&out).with_extension("trace.csv");
        bytes.push((
            std::fs::read(&out).map_err(|e| e.to_string())?,
            std::fs::read(&trace).map_err(|e| e.to_string())?,
        ));
    }
    if bytes[0] != bytes[1] {
        return Err("same-seed search artifacts differ".into());
    }

    let mut mc_bytes = Vec::new();
    for name in ["m1.csv", "m2.csv"] {
        let out = search_out(name);
        let o = run_bin(&[
            "mc-verify", "--event", "tubular", "--dim", "3", "--seed", "1717", "--samples",
            "20000", "--out", &out,
        ])?;
        if o.status.code() != Some(0) {
            return Err(format!("mc-verify exit {:?}", o.status.code()));
        }
        mc_bytes.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    if mc_bytes[0] != mc_bytes[1] {
        return Err("same-seed mc-verify artifacts differ".into());
    }

    let mut ball_bytes = Vec::new();
    for workers in ["1", "4"] {
        let out = search_out(&format!("ball_w{workers}.jsonl"));
        let o = run_bin(&[
            "ball", "--spec", &spec, "--radius", "3", "--workers", workers, "--out", &out,
        ])?;
        if o.status.code() != Some(0) {
            return Err(format!("ball exit {:?}", o.status.code()));
        }
        ball_bytes.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    if ball_bytes[0] != ball_bytes[1] {
        return Err("ball artifact depends on --workers".into());
    }
    Ok(
        "search and mc-verify reruns are bitwise identical; radius-3 ball bytes agree for \
         1 and 4 workers"
            .into(),
    )
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("soundness-suite", criterion_soundness),
        ("trivial-negative-suite", criterion_trivial_negative),
        ("criterion-algebra", criterion_algebra),
        ("psi-properties", criterion_psi),
        ("closed-form-monte-carlo", criterion_mc),
        ("end-to-end-pipeline", criterion_pipeline),
        ("boost-arithmetic", criterion_boost),
        ("determinism", criterion_determinism),
    ];
    let mut failures = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failures.push(format!("{name}: {why}"));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "failed acceptance criteria:\n{}",
        failures.join("\n")
    );
}
