//! Acceptance criteria, each with its tolerance and wall-clock budget.
//! Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use stitchlab::dances::{mmt_chords, sample_at, PlanetDance, StitchGraph};
use stitchlab::kernel::ratio;
use stitchlab::oracle::{
    suite_aliasing, suite_cusps, suite_envelope, suite_families, suite_fundamental_correspondence,
    suite_intersections, suite_overlay, suite_shortest_vector, VerificationReport,
};
use stitchlab::overlay::overlay_decompose;

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_report(r: VerificationReport) -> Outcome {
    let mut detail = format!("{} cases", r.cases_run);
    if let Some(f) = r.failures.first() {
        detail.push_str(&format!(
            ", {} failing; first: {} expected {} got {}",
            r.failure_count, f.input, f.expected, f.actual
        ));
    }
    for n in &r.notes {
        detail.push_str(&format!("; {n}"));
    }
    Outcome {
        ok: r.passed(),
        detail,
    }
}

fn mmt_100_34() -> Outcome {
    let g = StitchGraph::new(100, 34).unwrap();
    let ok = mmt_chords(g) == sample_at(PlanetDance::new(3, 2).unwrap(), 100).unwrap();
    Outcome {
        ok,
        detail: "MMT(100,34) vs 100-sample of <3,2>".into(),
    }
}

fn decompositions() -> Outcome {
    let mut problems = Vec::new();
    let cases = [
        (206, 35, (3, 2), vec![ratio(0, 1), ratio(1, 2)]),
        (207, 35, (2, 1), vec![ratio(0, 1), ratio(1, 3), ratio(2, 3)]),
    ];
    for (m, a, (alpha, beta), rotations) in cases {
        let dec = overlay_decompose(m, a).unwrap();
        let mut got: Vec<_> = dec.rotations().into_iter().flatten().collect();
        got.sort();
        let dance = dec.analysis.reduced_dance;
        if dance != PlanetDance::new(alpha, beta).unwrap()
            || dec.analysis.coset_count as usize != rotations.len()
            || got != rotations
            || dec
                .cosets
                .iter()
                .any(|c| c.chords.len() as i64 != m / dec.analysis.coset_count)
        {
            problems.push(format!(
                "({m},{a}) gave {dance}, d = {}, rotations {got:?}",
                dec.analysis.coset_count
            ));
        }
    }
    Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            "(206,35) -> <3,2> x2, (207,35) -> <2,1> x3".into()
        } else {
            problems.join("; ")
        },
    }
}

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn run_cli(args: &[&str]) -> (bool, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_stitchlab"))
        .args(args)
        .env_remove("STITCHLAB_CANVAS_PX")
        .output()
        .expect("binary runs");
    (out.status.success(), out.stdout)
}

fn determinism() -> Outcome {
    let mut problems = Vec::new();
    let mut svg_count = 0;
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let tmp = tempfile::tempdir().unwrap();
            let p = |name: &str| tmp.path().join(name).to_string_lossy().into_owned();
            let mut ok = true;
            ok &= run_cli(&["stitch", "-m", "100", "-a", "34", "-o", &p("stitch.svg")]).0;
            let (analyze_ok, json) = run_cli(&["analyze", "-m", "206", "-a", "35", "--json"]);
            ok &= analyze_ok;
            ok &= run_cli(&["grid", "-m", "200", "-B", "9", "-o", &p("grid")]).0;
            ok &= run_cli(&["gallery", "-o", &p("gallery")]).0;
            let grid = read_tree(&tmp.path().join("grid"));
            let gallery = read_tree(&tmp.path().join("gallery"));
            let stitch = std::fs::read(tmp.path().join("stitch.svg")).unwrap_or_default();
            (ok, stitch, json, grid, gallery)
        })
        .collect();
    for (i, r) in runs.iter().enumerate() {
        if !r.0 {
            problems.push(format!("run {i} had a failing command"));
        }
    }
    let (a, b) = (&runs[0], &runs[1]);
    if a.1 != b.1 {
        problems.push("stitch differs".into());
    }
    if a.2 != b.2 {
        problems.push("analyze --json differs".into());
    }
    if a.3 != b.3 {
        problems.push("grid differs".into());
    }
    if a.4 != b.4 {
        problems.push("gallery differs".into());
    }
    svg_count += a.3.iter().filter(|(n, _)| n.ends_with(".svg")).count();
    if svg_count != 36 {
        problems.push(format!("grid emitted {svg_count} SVGs"));
    }
    if a.4.len() != 8 {
        problems.push(format!("gallery emitted {} files", a.4.len()));
    }
    Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("byte-identical across two runs; grid has {svg_count} SVGs")
        } else {
            problems.join("; ")
        },
    }
}

type Check = Box<dyn Fn() -> Outcome>;

fn main() {
    let criteria: Vec<(u32, &str, u64, Check)> = vec![
        (
            1,
            "fundamental correspondence, m <= 300",
            10,
            Box::new(|| from_report(suite_fundamental_correspondence(300))),
        ),
        (
            2,
            "MMT(100,34) equals the <3,2> sampling",
            1,
            Box::new(mmt_100_34),
        ),
        (
            3,
            "aliasing of reduced dances in [-8,8]",
            30,
            Box::new(|| from_report(suite_aliasing(8))),
        ),
        (
            4,
            "intersection count vs brute force, [-8,8]",
            30,
            Box::new(|| from_report(suite_intersections(8))),
        ),
        (
            5,
            "decompositions of (206,35) and (207,35)",
            1,
            Box::new(decompositions),
        ),
        (
            6,
            "shortest vector vs exhaustive scan, m <= 300",
            30,
            Box::new(|| from_report(suite_shortest_vector(300))),
        ),
        (
            7,
            "overlay partition and colinearity, m <= 300",
            60,
            Box::new(|| from_report(suite_overlay(300))),
        ),
        (
            8,
            "family predictions, b in [2,9], m near 200",
            10,
            Box::new(|| from_report(suite_families(8))),
        ),
        (
            9,
            "envelope tangency, 720 samples, tol 1e-9",
            10,
            Box::new(|| from_report(suite_envelope(6))),
        ),
        (
            10,
            "cusp counts equal |alpha - beta|",
            1,
            Box::new(|| from_report(suite_cusps(6))),
        ),
        (
            11,
            "rendering determinism and grid shape",
            30,
            Box::new(determinism),
        ),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let ok = outcome.ok && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{id:>2}] {name}: {} ({:.2}s of {budget}s){}",
            if ok { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { " over budget" }
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
