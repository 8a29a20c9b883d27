//! Acceptance criteria 1-9. Each criterion prints one PASS/FAIL line; the
//! process exits non-zero when any criterion fails.

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use revival::analysis::{fidelity_vs_g, linspace, predict_revival_time, window_median, window_min};
use revival::entanglement::{entropy_timeseries, EntropySample};
use revival::evolution::{density_matrix_elements, evolve, overlap, project_grid, to_fock_grid};
use revival::model::{BlockTable, ModelParams};
use revival::observables::{
    higher_quadrature_variance, mean_photon, moment, std_dev_xi, HigherQuadrature, HigherQuadratureSpec, Mode,
    QuadratureKind, QuadratureSpec,
};
use revival::selftest::{commutator_norm, grid_from_flat, propagation_deviation, random_state, spectrum_deviation};
use revival::states::{prepare, InitialState};
use revival::Complex;

// 1
const PROPAGATION_TOL: f64 = 1e-10;
const ORACLE_RUNTIME_S: f64 = 1.0;
// 2
const SPECTRUM_TOL: f64 = 1e-8;
// 3
const ENTROPY_SYMMETRY_TOL: f64 = 1e-8;
const PRODUCT_ENTROPY_TOL: f64 = 1e-8;
const PURITY_TOL: f64 = 1e-8;
// 4, 5
const SAMPLES: usize = 20_000;
const DIP_WINDOW: f64 = 0.2;
const MEDIAN_FROM: f64 = 0.5;
const DIP_PASS_RATIO: f64 = 0.1;
const DIP_FAIL_RATIO: f64 = 0.5;
// 6
const FIDELITY_TOL: f64 = 0.02;
// 7
const ODD_MOMENT_TOL: f64 = 1e-10;
const XI_COHERENT: f64 = 0.5;
const XI_WINDOW: f64 = 0.3;
// 8
const CLOSED_FORM_TOL: f64 = 1e-8;
const DECOUPLED_ENTROPY_TOL: f64 = 1e-10;
const CLOSED_FORM_RUNTIME_S: f64 = 1.0;

fn paper() -> ModelParams<f64> {
    ModelParams::weak_nonlinearity()
}

fn alpha(nu: f64) -> Complex<f64> {
    Complex::new(nu.sqrt(), 0.0)
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// Entropy run over `[0, 1.2 T_rev]` at the acceptance sample density.
struct EntropyRun {
    label: &'static str,
    t_rev: f64,
    times: Vec<f64>,
    samples: Vec<EntropySample<f64>>,
}

impl EntropyRun {
    fn new(label: &'static str, state: InitialState<f64>) -> Self {
        let p = paper();
        let t_rev = predict_revival_time(&state, &p).unwrap();
        let (_, table, c0) = prepare(&state, &p, 1e-12).unwrap();
        let times = linspace(0.0, (1.0 + DIP_WINDOW) * t_rev, SAMPLES);
        let samples = entropy_timeseries(&c0, &table, &times).unwrap();
        Self { label, t_rev, times, samples }
    }

    fn svne(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.field.svne).collect()
    }

    /// Minimum SVNE near `T_rev` over the median SVNE on `[0.5, T_rev]`.
    fn dip_ratio(&self) -> (f64, f64, f64) {
        let s = self.svne();
        let lo = (1.0 - DIP_WINDOW) * self.t_rev;
        let hi = (1.0 + DIP_WINDOW) * self.t_rev;
        let (_, min) = window_min(&self.times, &s, lo, hi).unwrap();
        let med = window_median(&self.times, &s, MEDIAN_FROM, self.t_rev).unwrap();
        (min / med, min, med)
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..5 {
        worst = worst.max(propagation_deviation(&paper(), 6, seed, &[0.1, 1.0, 10.0]).unwrap());
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst <= PROPAGATION_TOL && secs < ORACLE_RUNTIME_S,
        format!("max amplitude deviation {worst:.2e} (tol {PROPAGATION_TOL:.0e}), {secs:.3} s for 5 random states"),
    )
}

fn criterion_2() -> Verdict {
    let dev = spectrum_deviation(&paper(), 6).unwrap();
    let comm = commutator_norm(&paper(), 6);
    verdict(
        dev <= SPECTRUM_TOL && comm == 0.0,
        format!("spectrum multiset deviation {dev:.2e} (tol {SPECTRUM_TOL:.0e}), ||[N_tot, H]|| = {comm}"),
    )
}

fn criterion_3(runs: &[&EntropyRun]) -> Verdict {
    let mut asym: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut at_zero: f64 = 0.0;
    let mut count = 0;
    for run in runs {
        for s in &run.samples {
            asym = asym.max((s.field.svne - s.atom.svne).abs()).max((s.field.sle - s.atom.sle).abs());
            min_gap = min_gap.min(s.field.svne - s.field.sle).min(s.atom.svne - s.atom.sle);
            count += 1;
        }
        let z = &run.samples[0];
        at_zero = at_zero.max(z.field.svne).max(z.field.sle).max(z.atom.svne).max(z.atom.sle);
    }
    // full-state purity on oracle-scale spaces: random states and the three families
    let mut purity: f64 = 0.0;
    let p = paper();
    let table = BlockTable::build(&p, 6).unwrap();
    for seed in 0..3 {
        let c0 = project_grid(&grid_from_flat(6, &random_state(6, seed)), &table).unwrap();
        for t in [0.1, 1.0, 10.0] {
            purity = purity.max(density_matrix_elements(&evolve(&c0, &table, t)).idempotency_defect());
        }
    }
    for state in [InitialState::Fock(5), InitialState::Coherent(alpha(1.0)), InitialState::photon_added(alpha(1.0), 1)] {
        let (_, table, c0) = prepare(&state, &p, 1e-12).unwrap();
        purity = purity.max(density_matrix_elements(&evolve(&c0, &table, 2.0)).idempotency_defect());
    }
    verdict(
        asym <= ENTROPY_SYMMETRY_TOL && min_gap >= 0.0 && at_zero <= PRODUCT_ENTROPY_TOL && purity <= PURITY_TOL,
        format!(
            "{count} samples: max |S_a-S_b|,|d_a-d_b| = {asym:.2e}, min(SVNE-SLE) = {min_gap:.2e}, \
             t=0 entropy <= {at_zero:.2e}, max ||rho^2-rho|| = {purity:.2e}"
        ),
    )
}

fn criterion_4(fock: &EntropyRun, cs: &EntropyRun) -> Verdict {
    let (ra, min_a, med_a) = fock.dip_ratio();
    let (rb, min_b, med_b) = cs.dip_ratio();
    verdict(
        ra < DIP_PASS_RATIO && rb < DIP_PASS_RATIO,
        format!(
            "{}: min {min_a:.4} / median {med_a:.4} = {ra:.4}; {}: min {min_b:.4} / median {med_b:.4} = {rb:.4} (need < {DIP_PASS_RATIO})",
            fock.label, cs.label
        ),
    )
}

fn criterion_5(pacs: &EntropyRun, cs: &EntropyRun) -> Verdict {
    let (rp, min_p, med_p) = pacs.dip_ratio();
    let (rc, ..) = cs.dip_ratio();
    verdict(
        rp > DIP_FAIL_RATIO && rc < DIP_PASS_RATIO,
        format!(
            "{}: min {min_p:.4} / median {med_p:.4} = {rp:.4} (need > {DIP_FAIL_RATIO}); {}: {rc:.4} (need < {DIP_PASS_RATIO})",
            pacs.label, cs.label
        ),
    )
}

fn criterion_6() -> Verdict {
    let gs = [25.0, 50.0, 100.0, 200.0];
    let ms = [0usize, 1, 5];
    let table: Vec<Vec<f64>> = ms
        .iter()
        .map(|&m| {
            let state = InitialState::photon_added(alpha(1.0), m);
            fidelity_vs_g(&state, &paper(), &gs).unwrap().into_iter().map(|(_, r)| r.fidelity).collect()
        })
        .collect();
    let mut ok = true;
    for row in &table {
        ok &= row.windows(2).all(|w| w[1] >= w[0] - FIDELITY_TOL);
    }
    for j in 0..gs.len() {
        ok &= (1..ms.len()).all(|i| table[i][j] <= table[i - 1][j] + FIDELITY_TOL);
    }
    let rows: Vec<String> = ms
        .iter()
        .zip(&table)
        .map(|(m, r)| format!("m={m}: [{}]", r.iter().map(|f| format!("{f:.3}")).collect::<Vec<_>>().join(", ")))
        .collect();
    verdict(ok, format!("C(T_rev) at g = {gs:?}: {}", rows.join("; ")))
}

fn criterion_7() -> Verdict {
    let p = paper();
    // (a) odd moments for a number state at random times
    let (_, table, c0) = prepare(&InitialState::Fock(10), &p, 1e-12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut odd: f64 = 0.0;
    for _ in 0..100 {
        let t = rng.gen_range(0.0..2.0 * TAU);
        let grid = to_fock_grid(&evolve(&c0, &table, t), &table);
        for kind in [QuadratureKind::Xi, QuadratureKind::Eta] {
            for order in [1, 3] {
                odd = odd.max(moment(&grid, QuadratureSpec::new(kind, order).unwrap()).unwrap().abs());
            }
        }
    }
    let pass_a = odd <= ODD_MOMENT_TOL;

    // (b) Δξ near 2π
    let times = linspace(TAU - XI_WINDOW, TAU + XI_WINDOW, 6001);
    let min_dxi = |state: InitialState<f64>| {
        let (_, table, c0) = prepare(&state, &p, 1e-12).unwrap();
        times
            .iter()
            .map(|&t| std_dev_xi(&to_fock_grid(&evolve(&c0, &table, t), &table)).unwrap())
            .fold(f64::INFINITY, f64::min)
    };
    let cs = min_dxi(InitialState::Coherent(alpha(1.0)));
    let p1 = min_dxi(InitialState::photon_added(alpha(1.0), 1));
    let p5 = min_dxi(InitialState::photon_added(alpha(1.0), 5));
    let pass_b = cs < XI_COHERENT && p1 >= XI_COHERENT && p5 >= XI_COHERENT;

    // (c) amplitude-squared squeezing at T_rev / 2
    let mut pass_c = true;
    let mut notes = Vec::new();
    for (label, state) in [
        ("Fock(1)", InitialState::Fock(1)),
        ("CS", InitialState::Coherent(alpha(1.0))),
        ("PACS m=1", InitialState::photon_added(alpha(1.0), 1)),
        ("PACS m=5", InitialState::photon_added(alpha(1.0), 5)),
    ] {
        let t = 0.5 * predict_revival_time(&state, &p).unwrap();
        let (_, table, c0) = prepare(&state, &p, 1e-12).unwrap();
        let grid = to_fock_grid(&evolve(&c0, &table, t), &table);
        let z1 = higher_quadrature_variance(&grid, HigherQuadratureSpec::new(HigherQuadrature::Z1, 2).unwrap()).unwrap();
        let z2 = higher_quadrature_variance(&grid, HigherQuadratureSpec::new(HigherQuadrature::Z2, 2).unwrap()).unwrap();
        let squeezed = z1.squeezed || z2.squeezed;
        pass_c &= !squeezed;
        notes.push(format!(
            "{label} t={t:.4}: var Z1 {:.4}, var Z2 {:.4}, bound {:.4}{}",
            z1.variance,
            z2.variance,
            z1.threshold,
            if squeezed { " SQUEEZED" } else { "" }
        ));
    }
    let tag = |b: bool| if b { "pass" } else { "FAIL" };
    verdict(
        pass_a && pass_b && pass_c,
        format!(
            "(a) {} max odd moment {odd:.2e}; (b) {} min dxi CS {cs:.4}, PACS1 {p1:.4}, PACS5 {p5:.4}; (c) {} {}",
            tag(pass_a),
            tag(pass_b),
            tag(pass_c),
            notes.join("; ")
        ),
    )
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let g: f64 = 100.0;
    let rotation = ModelParams::new(1.0, 1.0, 0.0, g).unwrap();
    let times = linspace(0.0, 0.1, 201);
    let mut photon: f64 = 0.0;
    let mut over: f64 = 0.0;
    for big_n in [1usize, 5, 10] {
        let (_, table, c0) = prepare(&InitialState::Fock(big_n), &rotation, 1e-12).unwrap();
        for &t in &times {
            let st = evolve(&c0, &table, t);
            let cos2 = (g * t).cos().powi(2);
            let grid = to_fock_grid(&st, &table);
            photon = photon.max((mean_photon(&grid, Mode::Field) - big_n as f64 * cos2).abs());
            over = over.max((overlap(&c0, &st) - cos2.powi(big_n as i32)).abs());
        }
    }
    let decoupled = ModelParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
    let mut ent: f64 = 0.0;
    for state in [InitialState::Fock(10), InitialState::Coherent(alpha(1.0)), InitialState::photon_added(alpha(1.0), 5)] {
        let (_, table, c0) = prepare(&state, &decoupled, 1e-12).unwrap();
        for s in entropy_timeseries(&c0, &table, &linspace(0.0, 4.0 * PI, 200)).unwrap() {
            ent = ent.max(s.field.svne).max(s.field.sle).max(s.atom.svne).max(s.atom.sle);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        photon <= CLOSED_FORM_TOL && over <= CLOSED_FORM_TOL && ent <= DECOUPLED_ENTROPY_TOL && secs < CLOSED_FORM_RUNTIME_S,
        format!("|<a+a> - N cos^2| {photon:.2e}, |C - cos^2N| {over:.2e}, g=0 entropy {ent:.2e}, {secs:.3} s"),
    )
}

fn criterion_9() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"initial": {"kind": "photon_added", "alpha": {"re": 0.8, "im": 0.6}, "m": 1}, "n_samples": 400}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let run = |threads: &str| -> (Vec<u8>, Vec<u8>) {
        let status = Command::new(env!("CARGO_BIN_EXE_revival"))
            .args(["run", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .env("REVIVAL_THREADS", threads)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        let read = |name: &str| std::fs::read(Path::new(&out).join(name)).unwrap();
        (read("timeseries.csv"), read("report.json"))
    };
    let a = run("1");
    let b = run("1");
    let c = run("4");
    let same = a == b && a == c;
    verdict(same, format!("3 runs (1, 1, 4 threads): timeseries.csv {} bytes, identical = {same}", a.0.len()))
}

fn main() {
    let mut results: Vec<(u32, &str, Verdict)> = Vec::new();
    let mut report = |n: u32, name: &'static str, v: Verdict| {
        println!("criterion {n} [{name}]: {} - {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        results.push((n, name, v));
    };

    report(1, "oracle equivalence", criterion_1());
    report(2, "block spectrum", criterion_2());
    let fock = EntropyRun::new("Fock(10)", InitialState::Fock(10));
    let cs = EntropyRun::new("CS nu=1", InitialState::Coherent(alpha(1.0)));
    let pacs = EntropyRun::new("PACS nu=5 m=5", InitialState::photon_added(alpha(5.0), 5));
    report(3, "entropy identities", criterion_3(&[&fock, &cs, &pacs]));
    report(4, "revival times", criterion_4(&fock, &cs));
    report(5, "PACS degradation", criterion_5(&pacs, &cs));
    report(6, "fidelity ordering", criterion_6());
    report(7, "quadrature signatures", criterion_7());
    report(8, "closed-form limits", criterion_8());
    report(9, "determinism", criterion_9());

    let failed: Vec<String> = results.iter().filter(|r| !r.2.pass).map(|r| format!("{} ({})", r.0, r.1)).collect();
    println!("acceptance: {} of {} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
