use std::fs;
use std::path::{Path, PathBuf};

use polarnorm::construct::{
    build_elementary, decompose_with, decomposition_deviation, weighted_direct_sum,
    DecomposeOptions,
};
use polarnorm::model::{associated_matrix, verify_tensor_position};
use polarnorm::norms::{estimate_lower_bound, gap_report, GapReport, Mode, WitnessConfig};
use polarnorm::{AssociatedMatrix, ElementaryBlock, FourthRoot, PairIndex, SpanElement, Triplet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{
    Cli, Command, DecomposeArgs, ElementaryArgs, EstimateArgs, GenArgs, Limits, ModeArg,
    SearchArgs, VerifyArgs,
};
use crate::output::{emit, note, read_json, to_json, write_atomic, Failure, Outcome};

pub fn run(cli: &Cli) -> Outcome {
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        return Err(Failure::Input(format!(
            "--tol {} must be finite and nonnegative",
            cli.tol
        )));
    }
    match &cli.command {
        Command::Gen(a) => gen(cli, a),
        Command::Decompose(a) => decompose(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Elementary(a) => elementary(cli, a),
        Command::Estimate(a) => estimate(cli, a),
    }
}

fn check_limits(n: usize, k: usize, limits: &Limits) -> Outcome {
    if n > limits.max_n || k > limits.max_k {
        return Err(Failure::Input(format!(
            "(n, k) = ({n}, {k}) exceeds the limits ({}, {}); raise --max-n / --max-k",
            limits.max_n, limits.max_k
        )));
    }
    Ok(())
}

fn gen(cli: &Cli, a: &GenArgs) -> Outcome {
    check_limits(a.n, a.k, &a.limits)?;
    if a.n < 2 {
        return Err(Failure::Input(format!(
            "--n must be at least 2, got {}",
            a.n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let x = SpanElement::random(a.n, a.k, a.density, &mut rng)?;
    emit(&x, cli.out.as_deref())?;
    note(
        cli.quiet,
        format_args!(
            "generated n={} k={} with {} nonzero coefficients",
            a.n,
            a.k,
            x.nonzero_count()
        ),
    );
    Ok(())
}

fn decompose(cli: &Cli, a: &DecomposeArgs) -> Outcome {
    let t: Triplet = read_json(&a.input)?;
    check_limits(t.n(), t.k(), &a.limits)?;
    let cert = decompose_with(&t, DecomposeOptions { prune: !a.no_prune });
    let (off, diag) = decomposition_deviation(&t, &cert)?;
    emit(&cert, cli.out.as_deref())?;

    let sym = t.symbols() as f64;
    let factor = sym * sym - sym;
    let scale = associated_matrix(&t).matrix().max_abs().max(1.0);
    note(
        cli.quiet,
        format_args!(
            "{} blocks; off-diagonal deviation {off:.3e}; diagonal deviation {:.3e}",
            cert.blocks().len(),
            diag / factor
        ),
    );
    if off > cli.tol * scale || diag > cli.tol * scale * factor {
        return Err(Failure::Check(format!(
            "decomposition deviates beyond tolerance {:e}",
            cli.tol
        )));
    }
    Ok(())
}

fn configs(cli: &Cli, s: &SearchArgs) -> (WitnessConfig, WitnessConfig) {
    let full = WitnessConfig {
        rep_dim: s.dims,
        restarts: s.restarts,
        iters: s.iters,
        seed: cli.seed,
        ..WitnessConfig::full()
    };
    let min = WitnessConfig {
        rep_dim: s.min_dims,
        mode: Mode::Min,
        ..full.clone()
    };
    (full, min)
}

fn verify_one(cli: &Cli, a: &VerifyArgs, path: &Path) -> Outcome<GapReport> {
    let x: SpanElement = read_json(path)?;
    check_limits(x.n(), x.k(), &a.limits)?;
    let (full, min) = configs(cli, &a.search);
    Ok(gap_report(&x, &full, &min)?)
}

fn summarize(r: &GapReport) -> String {
    format!(
        "lb_full_sq {:.9} lb_min_sq {:.9} certified_min_lb_sq {:.9} ratio {:.6} certified_ratio {:.6} ceiling {:.6} verdict {}",
        r.lb_full_sq, r.lb_min_sq, r.certified_min_lb_sq, r.ratio, r.certified_ratio, r.ceiling, r.verdict
    )
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Outcome {
    if !a.input.is_dir() {
        let report = verify_one(cli, a, &a.input)?;
        emit(&report, cli.out.as_deref())?;
        note(cli.quiet, summarize(&report));
        return if report.verdict {
            Ok(())
        } else {
            Err(Failure::Check("theorem chain failed".into()))
        };
    }

    let files = instance_files(&a.input)?;
    if files.is_empty() {
        return Err(Failure::Input(format!(
            "no .json files in {}",
            a.input.display()
        )));
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
    }
    let mut passed = 0;
    for path in &files {
        let report = verify_one(cli, a, path)?;
        if let Some(dir) = &cli.out {
            let stem = path.file_stem().unwrap_or_default().to_string_lossy();
            write_atomic(&dir.join(format!("{stem}.report.json")), &to_json(&report)?)?;
        }
        note(
            cli.quiet,
            format_args!("{}: {}", path.display(), summarize(&report)),
        );
        if report.verdict {
            passed += 1;
        }
    }
    println!("verified {passed}/{} verdicts true", files.len());
    if passed == files.len() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} verdicts false",
            files.len() - passed
        )))
    }
}

fn instance_files(dir: &Path) -> Outcome<Vec<PathBuf>> {
    let entries = fs::read_dir(dir)
        .map_err(|e| Failure::Input(format!("cannot list {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

#[derive(Serialize)]
struct ElementaryOutput {
    triplet: Triplet,
    block: ElementaryBlock,
    associated_matrix: AssociatedMatrix,
}

fn elementary(cli: &Cli, a: &ElementaryArgs) -> Outcome {
    check_limits(a.n, a.k, &a.limits)?;
    let pair = PairIndex::new(a.pair[0], a.pair[1], a.n)?;
    let eps = FourthRoot::from_power(a.eps)?;
    let (triplet, block) = build_elementary(a.n, a.k, pair, eps)?;
    let g = associated_matrix(&triplet);
    let deviation = g.max_abs_diff(&block.associated_matrix(a.n))?;
    let cert = weighted_direct_sum(a.n, a.k, vec![block.clone()])?;
    let self_check = verify_tensor_position(&triplet, &cert, cli.tol)?;
    emit(
        &ElementaryOutput {
            triplet,
            block,
            associated_matrix: g,
        },
        cli.out.as_deref(),
    )?;
    note(
        cli.quiet,
        format_args!("pattern deviation {deviation:.3e}; tensor-position self-check {self_check}"),
    );
    if deviation > cli.tol || !self_check {
        return Err(Failure::Check(
            "elementary triplet does not match its pattern".into(),
        ));
    }
    Ok(())
}

fn estimate(cli: &Cli, a: &EstimateArgs) -> Outcome {
    let x: SpanElement = read_json(&a.input)?;
    check_limits(x.n(), x.k(), &a.limits)?;
    let (full, min) = configs(cli, &a.search);
    let cfg = match a.mode {
        ModeArg::Full => full,
        ModeArg::Min => min,
    };
    let est = estimate_lower_bound(&x, &cfg)?;
    emit(&est, cli.out.as_deref())?;
    note(
        cli.quiet,
        format_args!(
            "{:?} lower bound on the squared norm: {:.12}",
            cfg.mode, est.value_sq
        ),
    );
    Ok(())
}
