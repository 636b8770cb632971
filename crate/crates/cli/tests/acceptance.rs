//! Exit criteria for the engine. Each test prints one `PASS`/`FAIL` line.
//!
//! Run with `cargo test -p bch-cli --test acceptance -- --nocapture`.

use std::process::Command;
use std::sync::Mutex;

use bch_core::series::Pruning;
use bch_core::{
    coefficient_block, coefficient_naive, enumerate_words, expand, precompute_tables,
    verify_convergence, ExactRational, Letter, Word,
};

/// Criteria run one at a time so the timing checks see an idle machine.
static SERIAL: Mutex<()> = Mutex::new(());

fn report(id: u32, name: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("[{status}] criterion {id} ({name}): {detail}");
}

fn bch(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_bch"))
        .args(args)
        .output()
        .expect("bch binary runs")
}

fn q(s: &str) -> ExactRational {
    s.parse().unwrap()
}

#[test]
fn criterion_1_oracle_equivalence_exhaustive() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let tables = precompute_tables(12).unwrap();
    let mut checked = 0usize;
    let mut mismatches = Vec::new();
    for n in 1..=12 {
        for word in enumerate_words(n).unwrap() {
            if coefficient_block(&word, &tables).unwrap() != coefficient_naive(&word) {
                mismatches.push(word.to_string());
            }
            checked += 1;
        }
    }
    let pass = checked == 8190 && mismatches.is_empty();
    report(
        1,
        "oracle equivalence",
        pass,
        format!("{checked} words, {} mismatches", mismatches.len()),
    );
    assert!(pass, "mismatches: {mismatches:?}");
}

#[test]
fn criterion_2_closed_form_spot_values() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let tables = precompute_tables(12).unwrap();
    let m = |w: &Word| coefficient_block(w, &tables).unwrap();
    let p = |s: &str| m(&Word::parse(s).unwrap());

    let mut failures = Vec::new();
    let mut check = |label: String, got: ExactRational, want: ExactRational| {
        if got != want {
            failures.push(format!("{label}: got {got}, want {want}"));
        }
    };
    for (w, v) in [
        ("X", "1"),
        ("Y", "1"),
        ("XY", "1/4"),
        ("YX", "-1/4"),
        ("XXY", "1/36"),
        ("XYX", "-1/18"),
        ("YYX", "1/36"),
        ("YXY", "-1/18"),
    ] {
        check(format!("M({w})"), p(w), q(v));
    }
    for k in 2..=12 {
        let word = Word::new(vec![Letter::X; k]).unwrap();
        check(format!("M(X^{k})"), m(&word), ExactRational::zero());
    }
    check("M(XXY)-M(XYX)".into(), p("XXY") - p("XYX"), q("1/12"));
    check("M(YYX)-M(YXY)".into(), p("YYX") - p("YXY"), q("1/12"));

    let pass = failures.is_empty();
    report(
        2,
        "closed-form spot values",
        pass,
        format!("{} failures", failures.len()),
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_3_numerical_ground_truth() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    const ORDER: usize = 6;
    const DIM: usize = 4;
    const SAMPLES: usize = 20;
    const SEED: u64 = 0;
    let eps: f64 = 0.05;
    let bound = 1e2 * eps.powi(7);
    let (ratio_lo, ratio_hi) = (2f64.powi(4), 2f64.powi(6));

    let tables = precompute_tables(ORDER).unwrap();
    let coarse = verify_convergence(ORDER, DIM, eps, SAMPLES, SEED, &tables).unwrap();
    let fine = verify_convergence(ORDER, DIM, eps / 2.0, SAMPLES, SEED, &tables).unwrap();
    let ratio = coarse.max_residual / fine.max_residual;

    let bound_ok = coarse.max_residual <= bound;
    let ratio_ok = (ratio_lo..=ratio_hi).contains(&ratio);
    report(
        3,
        "numerical ground truth",
        bound_ok && ratio_ok,
        format!(
            "max_residual {:.3e} (bound {bound:.3e}, {}), halving ratio {ratio:.2} (bracket [{ratio_lo}, {ratio_hi}], {})",
            coarse.max_residual,
            if bound_ok { "ok" } else { "exceeded" },
            if ratio_ok { "ok" } else { "outside" },
        ),
    );
    assert!(
        bound_ok,
        "max residual {} exceeds {bound}",
        coarse.max_residual
    );
    assert!(
        ratio_ok,
        "halving ratio {ratio} outside [{ratio_lo}, {ratio_hi}]"
    );
}

#[test]
fn criterion_4_table_properties() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    use bch_core::{f_prime, g_prime};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    let fact = |n: usize| (1..=n).fold(BigInt::one(), |a, k| a * k);

    // surjection recurrence
    let mut rec = vec![vec![BigInt::zero(); 31]; 31];
    rec[0][0] = BigInt::one();
    let mut f_failures = 0;
    for u in 1..=30usize {
        for n in 1..=u {
            rec[u][n] = (&rec[u - 1][n] + &rec[u - 1][n - 1]) * n;
            if f_prime(u, n) != rec[u][n] {
                f_failures += 1;
            }
        }
    }

    // direct enumeration of cuts of X^u Y^v into n pieces
    let tables = precompute_tables(8).unwrap();
    let mut g_failures = 0;
    let mut g_checked = 0;
    for u in 0..=8usize {
        for v in 0..=8 - u {
            let len = u + v;
            if len == 0 {
                continue;
            }
            let mut by_pieces = vec![BigRational::zero(); len + 1];
            for mask in 0u32..(1 << (len - 1)) {
                let mut denom = BigInt::one();
                let mut start = 0;
                for end in 1..=len {
                    if end == len || mask & (1 << (end - 1)) != 0 {
                        let r = u.min(end).saturating_sub(start);
                        let s = end.saturating_sub(u.max(start));
                        denom *= fact(r) * fact(s);
                        start = end;
                    }
                }
                by_pieces[mask.count_ones() as usize + 1] += BigRational::new(BigInt::one(), denom);
            }
            for (n, weight) in by_pieces.into_iter().enumerate().skip(1) {
                let expected = weight * BigRational::from_integer(fact(u) * fact(v));
                let want = BigRational::from_integer(g_prime(u, v, n).unwrap());
                let table = BigRational::from_integer(tables.g_prime(u, v, n).unwrap());
                if expected != want || expected != table {
                    g_failures += 1;
                }
                g_checked += 1;
            }
        }
    }

    let pass = f_failures == 0 && g_failures == 0;
    report(
        4,
        "table properties",
        pass,
        format!("f' mismatches {f_failures}/465, g' mismatches {g_failures}/{g_checked}"),
    );
    assert!(pass);
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn parse_bench(csv: &str) -> Vec<(usize, String, usize, f64)> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].to_string(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn criterion_5_scaling_benchmark() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let block = bch(&[
        "--threads",
        "1",
        "bench",
        "--min-order",
        "12",
        "--max-order",
        "18",
        "--mode",
        "block",
    ]);
    assert!(block.status.success());
    let block = parse_bench(&String::from_utf8(block.stdout).unwrap());
    assert_eq!(block.len(), 7);
    for (order, mode, count, time) in &block {
        assert_eq!(mode, "block");
        assert_eq!(*count, (1usize << (order + 1)) - 2);
        assert!(*time > 0.0);
    }
    let points: Vec<(f64, f64)> = block.iter().map(|r| (r.0 as f64, r.3.log2())).collect();
    let slope = least_squares_slope(&points);

    let naive = bch(&[
        "--threads",
        "1",
        "bench",
        "--min-order",
        "14",
        "--max-order",
        "14",
        "--mode",
        "naive",
    ]);
    assert!(naive.status.success());
    let naive = parse_bench(&String::from_utf8(naive.stdout).unwrap());
    let block_14 = block.iter().find(|r| r.0 == 14).unwrap().3;
    let speedup = naive[0].3 / block_14;

    let slope_ok = (1.3..=1.7).contains(&slope);
    let speedup_ok = speedup >= 10.0;
    report(
        5,
        "scaling benchmark",
        slope_ok && speedup_ok,
        format!(
            "log2 slope {slope:.3} over N=12..18 (bracket [1.3, 1.7], {}), N=14 speedup {speedup:.1}x (need >= 10x, {})",
            if slope_ok { "ok" } else { "outside" },
            if speedup_ok { "ok" } else { "too slow" },
        ),
    );
    assert!(
        speedup_ok,
        "block mode only {speedup:.1}x faster than naive at N=14"
    );
    assert!(slope_ok, "slope {slope:.3} outside [1.3, 1.7]");
}

#[test]
fn criterion_6_determinism() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let runs: Vec<Vec<u8>> = [None, Some("1"), Some("3"), Some("8"), None]
        .iter()
        .map(|threads| {
            let mut args = Vec::new();
            if let Some(t) = threads {
                args.extend(["--threads", t]);
            }
            args.extend(["expand", "--order", "10", "--format", "json"]);
            let out = bch(&args);
            assert!(out.status.success());
            assert!(out.stderr.is_empty());
            out.stdout
        })
        .collect();
    let identical = runs.windows(2).all(|p| p[0] == p[1]);

    // and the bytes describe the same series the library computes
    let tables = precompute_tables(10).unwrap();
    let library = expand(10, Pruning::default(), &tables).unwrap();
    let parsed = bch_core::series::parse_json(std::str::from_utf8(&runs[0]).unwrap()).unwrap();
    let consistent = parsed == library;

    let pass = identical && consistent;
    report(
        6,
        "determinism",
        pass,
        format!(
            "{} runs, {} bytes each, identical={identical}",
            runs.len(),
            runs[0].len()
        ),
    );
    assert!(pass);
}
