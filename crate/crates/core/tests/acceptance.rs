//! Acceptance criteria 1-10, run in order in one test so that the audit
//! totals read by criterion 9 cover every computation before it.

use std::time::{Duration, Instant};

use monadcert::audit::{self, Check};
use monadcert::monads::{chi_p3, shape_for_genus, ChernData};
use monadcert::pipeline::{appendix_b_sweep, random_monad_survey, run_scenario, Report, ScenarioConfig};

const G11_MAX_RETRIES: i64 = 8;
const G11_TIME: Duration = Duration::from_secs(30);
const G13_TIME: Duration = Duration::from_secs(60);
const G13_MIN_SAMPLES: u64 = 1000;
const LOW_GENUS_TRIALS: u32 = 20;
const LOW_GENUS_TIME: Duration = Duration::from_secs(10);
const SWEEP_CONFIGS: usize = 100;
const SWEEP_TIME: Duration = Duration::from_secs(60);

struct Outcome {
    lines: Vec<String>,
    failed: Vec<usize>,
}

impl Outcome {
    fn record(&mut self, n: usize, ok: bool, detail: String) {
        let line = format!("criterion {n:>2}: {} {detail}", if ok { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push(line);
        if !ok {
            self.failed.push(n);
        }
    }
}

/// `c2(E) = d` from `r = g - d + 4`, with the ranks of the shape table.
fn degree_oracle(g: u32) -> i64 {
    let r = if g <= 11 { 3 } else { 4 };
    g as i64 + 4 - r
}

/// Monomials of degree `t` in four variables, by enumeration.
fn count_monomials(t: i64) -> i64 {
    let mut n = 0;
    for a in 0..=t {
        for b in 0..=(t - a) {
            for _c in 0..=(t - a - b) {
                n += 1;
            }
        }
    }
    n
}

fn dim(r: &Report, cert: &str, key: &str) -> Option<i64> {
    r.find(cert).and_then(|c| c.dims.get(key).copied())
}

fn dims_are(r: &Report, cert: &str, want: &[(&str, i64)]) -> bool {
    r.find(cert).is_some_and(|c| c.passed()) && want.iter().all(|(k, v)| dim(r, cert, k) == Some(*v))
}

fn timed(cfg: &ScenarioConfig) -> (Report, Duration) {
    let t = Instant::now();
    let r = run_scenario(cfg).expect("valid configuration");
    (r, t.elapsed())
}

fn criterion_1(out: &mut Outcome) {
    let bundles = [(8, (0, 4, 1, 3)), (9, (1, 6, 2, 3)), (10, (2, 8, 3, 3)), (11, (3, 10, 4, 3)), (12, (0, 7, 3, 4)), (13, (1, 9, 4, 4))];
    let reflexive = [(5, (1, 3, 0)), (6, (2, 5, 1)), (7, (3, 7, 2))];
    let mut ok = true;
    for (g, want) in bundles {
        let s = shape_for_genus(g).unwrap();
        ok &= (s.rho, s.sigma, s.tau, s.r as usize) == want;
    }
    for (g, want) in reflexive {
        let s = shape_for_genus(g).unwrap();
        ok &= (s.rho, s.sigma, s.tau) == want;
    }
    out.record(1, ok, "shape_for_genus matches the table for g = 5..13".into());
}

fn criterion_2(out: &mut Outcome) {
    let mut ok = true;
    for g in 8..=13u32 {
        let s = shape_for_genus(g).unwrap();
        let e = ChernData::for_genus(g as i64, degree_oracle(g));
        ok &= -chi_p3(&e, -3).unwrap() == s.tau as i64;
        ok &= -chi_p3(&e.dual(), 1).unwrap() == s.rho as i64;
    }
    let o = ChernData::new(1, 0, 0, 0);
    for t in 0..=5 {
        ok &= chi_p3(&o, t).unwrap() == count_monomials(t);
    }
    out.record(2, ok, "-chi(E(-3)) = tau, -chi(E^dual(1)) = rho for g = 8..13; chi(O(t)) for t = 0..5".into());
}

fn criterion_3(out: &mut Outcome, reports: &[(u32, &Report)]) {
    let mut ok = true;
    let mut seen = Vec::new();
    for (g, r) in reports {
        let oracle = 2 * *g as i64 - 6 * degree_oracle(*g) + 58;
        let c = dim(r, "h0_E_two_routes", "construction");
        ok &= c == Some(oracle) && dim(r, "h0_E_two_routes", "formula") == Some(oracle);
        seen.push(format!("g={g}: {c:?}"));
    }
    ok &= reports.iter().map(|(g, _)| (*g, 2 * *g as i64 - 6 * degree_oracle(*g) + 58)).eq([(11, 8), (12, 10), (13, 6)]);
    out.record(3, ok, format!("h0(E) from formula and construction agree ({})", seen.join(", ")));
}

fn criterion_4(out: &mut Outcome, r: &Report, t: Duration) {
    let ok = r.all_passed()
        && dims_are(r, "curve_ideal", &[("h0_I_C(3)", 1), ("h1_I_C(3)", 0), ("h1_I_C(1)", 3)])
        && dims_are(r, "kernel_h1", &[("h1_K(-1)", 4)])
        && dims_are(r, "kernel_multiplication", &[("twist", 2)])
        && dims_are(r, "h1_E_vanishes", &[("h1_E", 0)])
        && dims_are(r, "global_generation", &[("h1_E", 0), ("h2_E(-1)", 0), ("h3_E(-2)", 0)])
        && dim(r, "construction", "retries").is_some_and(|n| n <= G11_MAX_RETRIES)
        && t < G11_TIME;
    out.record(4, ok, format!("g = 11 passes, retries {:?}, {:.2?}", dim(r, "construction", "retries"), t));
}

fn criterion_5(out: &mut Outcome, r: &Report, t: Duration) {
    let t_independent = dim(r, "h1_E_vanishes", "t_rank_on_Z") == Some(2);
    let ok = r.all_passed()
        && dims_are(r, "dual_twist_dimensions", &[("h0_Fdual(-1)", 2), ("h1_Fdual(-1)", 3), ("h1_F(-1)", 4)])
        && dims_are(r, "h1_E_vanishes", &[("h1_E", 0)])
        && (!t_independent || dim(r, "h1_E_vanishes", "h0_F(1)") == Some(0))
        && dims_are(r, "delta_sextic", &[("source_dim", 7), ("restriction_rank", 7), ("simple_points", 6)])
        && r.find("evaluation_corank").is_some_and(|c| c.passed() && c.samples >= G13_MIN_SAMPLES)
        && dim(r, "evaluation_corank", "max_corank").is_some_and(|c| c <= 1)
        && t < G13_TIME;
    let samples = r.find("evaluation_corank").map(|c| c.samples);
    out.record(5, ok, format!("g = 13 passes, corank samples {samples:?}, {t:.2?}"));
}

fn criterion_6(out: &mut Outcome, g12: &Report, g10: &Report) {
    let ok = g12.all_passed()
        && dims_are(g12, "kernel_multiplication", &[("twist", 2)])
        && dims_are(g12, "h1_E_vanishes", &[("h1_E", 0)])
        && g10.all_passed()
        && dims_are(g10, "two_lines_four_points_quadrics", &[("h0_O(2)", 10), ("h1_I(2)", 0)])
        && dims_are(g10, "kernel_h1_twist1", &[("h1_F(1)", 0)]);
    out.record(6, ok, "g = 12 multiplication onto with H1(E) = 0; g = 10 H1(F(1)) = 0".into());
}

fn criterion_7(out: &mut Outcome) {
    let start = Instant::now();
    let mut passed = Vec::new();
    for g in 5..=7 {
        let cfg = ScenarioConfig { trials: LOW_GENUS_TRIALS, ..ScenarioConfig::for_genus(g) };
        let r = run_scenario(&cfg).unwrap();
        let ok_trials = (0..LOW_GENUS_TRIALS)
            .filter(|i| {
                let p = format!("trial{i}.");
                let mine: Vec<_> = r.certificates.iter().filter(|c| c.name.starts_with(&p)).collect();
                !mine.is_empty() && mine.iter().all(|c| c.passed())
            })
            .count();
        passed.push((g, ok_trials));
    }
    let t = start.elapsed();
    let ok = passed.iter().all(|&(_, n)| n == LOW_GENUS_TRIALS as usize) && t < LOW_GENUS_TIME;
    out.record(7, ok, format!("g = 5..7 trials passing {passed:?} of {LOW_GENUS_TRIALS}, {t:.2?}"));
}

fn criterion_8(out: &mut Outcome) {
    let start = Instant::now();
    let (r, s) = appendix_b_sweep(&ScenarioConfig::default(), SWEEP_CONFIGS).unwrap();
    let t = start.elapsed();
    let ok = r.all_passed()
        && s.admissible >= SWEEP_CONFIGS as u64
        && s.lemma_pass == s.admissible
        && s.corollary_pass == s.admissible
        && t < SWEEP_TIME;
    out.record(8, ok, format!("sweep {s:?}, {t:.2?}"));
}

fn criterion_9(out: &mut Outcome) {
    let checks = [Check::RankNullity, Check::Euler, Check::TwoRoute, Check::SurjectiveAfterTwist];
    let totals: Vec<(u64, u64)> = checks.iter().map(|&c| audit::totals(c)).collect();
    let ok = totals.iter().all(|&(n, v)| n > 0 && v == 0);
    out.record(9, ok, format!("audit (checks, violations) {totals:?}"));
}

fn criterion_10(out: &mut Outcome) {
    let mut ok = true;
    for cfg in [
        ScenarioConfig { seed: 17, ..ScenarioConfig::for_genus(11) },
        ScenarioConfig { seed: 17, trials: 6, ..ScenarioConfig::for_genus(6) },
        ScenarioConfig { seed: 5, prime: 10007, ..ScenarioConfig::for_genus(13) },
    ] {
        let a = run_scenario(&cfg).unwrap().to_json();
        let b = run_scenario(&cfg).unwrap().to_json();
        ok &= a == b;
    }
    out.record(10, ok, "equal (prime, seed) give byte-identical JSON".into());
}

#[test]
fn acceptance() {
    let mut out = Outcome { lines: Vec::new(), failed: Vec::new() };
    criterion_1(&mut out);
    criterion_2(&mut out);

    // Monad routes, so that every audit kind is exercised before criterion 9.
    for g in [8, 9] {
        assert!(run_scenario(&ScenarioConfig::for_genus(g)).unwrap().all_passed());
        let survey = ScenarioConfig { trials: 4, samples: 200, ..ScenarioConfig::for_genus(g) };
        assert!(random_monad_survey(&survey).unwrap().all_passed());
    }

    let (g10, _) = timed(&ScenarioConfig::for_genus(10));
    let (g11, t11) = timed(&ScenarioConfig::for_genus(11));
    let (g12, _) = timed(&ScenarioConfig::for_genus(12));
    let (g13, t13) = timed(&ScenarioConfig::for_genus(13));
    criterion_3(&mut out, &[(11, &g11), (12, &g12), (13, &g13)]);
    criterion_4(&mut out, &g11, t11);
    criterion_5(&mut out, &g13, t13);
    criterion_6(&mut out, &g12, &g10);
    criterion_7(&mut out);
    criterion_8(&mut out);
    criterion_9(&mut out);
    criterion_10(&mut out);
    assert!(out.failed.is_empty(), "failed criteria {:?}:\n{}", out.failed, out.lines.join("\n"));
}
