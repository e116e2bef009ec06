use std::path::{Path, PathBuf};

use anyhow::Result;
use greedyq_core::diagnostics::{
    is_unimodal, limit_weights, limit_weights_l1, mismatch_profile, quasi_stationarity_ratio,
    rate_profile, stationarity_gap, RateProfile,
};
use greedyq_core::discrepancy::{star_disc, star_disc_bruteforce, PointSet};
use greedyq_core::greedy1d::voronoi_weights;
use greedyq_core::io::{GridFile, SequenceFile};
use greedyq_core::pricing::{
    bs_call_closed_form, call_rule, price_basket_mc, price_basket_product_levels,
    price_basket_quant, price_call_1d, BasketParams, BsParams, CallRule,
};
use greedyq_core::product_grid::{box_muller_from_preimage, box_muller_preimage};
use greedyq_core::{cubature, Distribution1D, GreedySequence, ProductGrid};

use crate::output::{num, read_points, write_csv, write_text};
use crate::{
    BuildArgs, Cli, Command, DiagnoseArgs, DiscArgs, DiscMethod, GridArgs, GridMethod, Instrument,
    IntegrateArgs, Mode, PriceArgs, PriceMethod, Suite, TestFn, Usage,
};

/// Maps a library error caused by the arguments to a usage error.
fn user<T>(r: greedyq_core::Result<T>) -> Result<T> {
    r.map_err(|e| Usage(e.to_string()).into())
}

fn need(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Usage(msg.to_string()).into())
    }
}

/// Runs the command and returns the one-line summary.
pub fn run(cli: &Cli) -> Result<String> {
    let out = cli.out.as_deref();
    let det = cli.deterministic;
    let result = match &cli.command {
        Command::Build(a) => build(a, out, det)?,
        Command::Integrate(a) => integrate(a, out, det)?,
        Command::Grid(a) => grid(a, out)?,
        Command::Disc(a) => disc(a, out, det)?,
        Command::Diagnose(a) => diagnose(a, out, det)?,
        Command::Price(a) => price(a, cli.seed, out, det)?,
    };
    Ok(format!("{}: {result}", cli.config()))
}

fn csv_to(out: Option<&Path>, det: bool, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    match out {
        Some(p) => write_csv(p, det, header, rows),
        None => Ok(()),
    }
}

fn build(a: &BuildArgs, out: Option<&Path>, det: bool) -> Result<String> {
    need(a.n >= 1, "--n must be at least 1")?;
    let seq = GreedySequence::build(a.dist, a.n);
    if let Some(p) = out {
        if p.extension().is_some_and(|e| e == "csv") {
            let rows: Vec<Vec<String>> = seq
                .points()
                .iter()
                .zip(seq.error_sq_trace())
                .enumerate()
                .map(|(k, (x, e))| vec![(k + 1).to_string(), num(*x), num(e.max(0.0).sqrt())])
                .collect();
            write_csv(p, det, &["k", "a_k", "e2"], &rows)?;
        } else {
            write_text(p, &SequenceFile::from_sequence(&seq).to_json())?;
        }
    }
    Ok(format!(
        "points={} e2={}",
        seq.len(),
        num(seq.error_sq().max(0.0).sqrt())
    ))
}

fn test_fn(f: TestFn) -> fn(f64) -> f64 {
    match f {
        TestFn::One => |_| 1.0,
        TestFn::X => |x| x,
        TestFn::X2 => |x| x * x,
        TestFn::Abs => f64::abs,
        TestFn::Sin => f64::sin,
    }
}

fn integrate(a: &IntegrateArgs, out: Option<&Path>, det: bool) -> Result<String> {
    need(a.n >= 1, "--n must be at least 1")?;
    let f = test_fn(a.func);
    let reference = a.dist.expectation(f);
    let values = match a.mode {
        Mode::Recursive => cubature::integrate_stream(a.dist, f, a.n),
        Mode::Full => {
            let seq = GreedySequence::build(a.dist, a.n);
            (1..=a.n)
                .map(|k| {
                    let pts = seq.prefix_sorted(k);
                    pts.iter()
                        .zip(voronoi_weights(&a.dist, &pts))
                        .map(|(x, w)| w * f(*x))
                        .sum()
                })
                .collect()
        }
    };
    let rows: Vec<Vec<String>> = values
        .iter()
        .enumerate()
        .map(|(k, v)| vec![(k + 1).to_string(), num(*v), num((v - reference).abs())])
        .collect();
    csv_to(out, det, &["n", "value", "abs_error"], &rows)?;
    let last = values[values.len() - 1];
    Ok(format!(
        "value={} abs_error={}",
        num(last),
        num((last - reference).abs())
    ))
}

fn marginal_path(out: &Path, k: usize) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "grid".into());
    out.with_file_name(format!("{stem}.m{k}.json"))
}

fn grid(a: &GridArgs, out: Option<&Path>) -> Result<String> {
    need(a.n >= 1, "--n must be at least 1")?;
    let (g, method) = match a.method {
        GridMethod::Product => {
            need(a.d >= 1, "--d must be at least 1")?;
            let mut g = user(ProductGrid::new(&vec![a.law; a.d]))?;
            g.grow_to(a.n);
            (g, "product")
        }
        GridMethod::Boxmuller => {
            let mut g = user(box_muller_preimage(a.d))?;
            g.grow_to(a.n);
            (g, "boxmuller")
        }
    };
    if let Some(p) = out {
        let mut refs = Vec::new();
        for (k, m) in g.marginals().iter().enumerate() {
            let mp = marginal_path(p, k);
            write_text(&mp, &SequenceFile::from_sequence(m).to_json())?;
            refs.push(
                mp.file_name()
                    .expect("has a file name")
                    .to_string_lossy()
                    .into_owned(),
            );
        }
        write_text(p, &GridFile::from_grid(&g, method, refs)?.to_json())?;
    }
    let sizes: Vec<String> = g.sizes().iter().map(usize::to_string).collect();
    Ok(format!(
        "size={} sizes={} e2={}",
        g.len(),
        sizes.join("x"),
        num(g.product_error_sq().max(0.0).sqrt())
    ))
}

fn disc(a: &DiscArgs, out: Option<&Path>, det: bool) -> Result<String> {
    need(
        (1..=3).contains(&a.d) || a.method == DiscMethod::Brute,
        "--d must be 1, 2 or 3 for the formula",
    )?;
    let pts = read_points(&a.input, a.d)?;
    let ps = user(PointSet::new(a.d, pts))?;
    let value = match a.method {
        DiscMethod::Formula => star_disc(&ps),
        DiscMethod::Brute => user(star_disc_bruteforce(&ps))?,
    };
    csv_to(
        out,
        det,
        &["d", "n", "disc"],
        &[vec![a.d.to_string(), ps.len().to_string(), num(value)]],
    )?;
    Ok(format!("n={} D={}", ps.len(), num(value)))
}

fn profile_rows(p: &RateProfile) -> Vec<Vec<String>> {
    p.rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                num(r.error),
                num(r.scaled),
                r.bound.map(num).unwrap_or_default(),
            ]
        })
        .collect()
}

fn diagnose(a: &DiagnoseArgs, out: Option<&Path>, det: bool) -> Result<String> {
    let dist: Distribution1D = a.dist;
    match a.suite {
        Suite::Rate | Suite::Mismatch => {
            let p = match a.suite {
                Suite::Rate => user(rate_profile(dist, a.r, a.n))?,
                _ => user(mismatch_profile(dist, a.s, a.n))?,
            };
            csv_to(
                out,
                det,
                &["n", "error", "n_times_error", "bound"],
                &profile_rows(&p),
            )?;
            let lo = p.rows.len() / 2;
            let spread = p.spread(p.rows[lo].n, a.n);
            let last = p.rows.last().expect("n ≥ 2");
            Ok(format!(
                "error={} scaled_spread_upper_half={}",
                num(last.error),
                num(spread)
            ))
        }
        Suite::Weights => {
            need(a.n >= 1, "--n must be at least 1")?;
            let seq = GreedySequence::build(dist, a.n);
            let limit = limit_weights(&seq, 2.0);
            let rows: Vec<Vec<String>> = seq
                .sorted_points()
                .iter()
                .zip(seq.weights())
                .zip(&limit)
                .map(|((x, w), l)| vec![num(*x), num(*w), num(*l)])
                .collect();
            csv_to(out, det, &["a_i", "weight", "limit_weight"], &rows)?;
            Ok(format!(
                "l1_to_limit={} unimodal={}",
                num(limit_weights_l1(&seq)),
                is_unimodal(seq.weights())
            ))
        }
        Suite::Stationarity => {
            need(a.n >= 1, "--n must be at least 1")?;
            let seq = GreedySequence::build(dist, a.n);
            let gaps: Vec<f64> = (1..=a.n)
                .map(|k| {
                    stationarity_gap(
                        &GreedySequence::from_points(dist, &seq.points()[..k])
                            .expect("valid prefix"),
                    )
                })
                .collect();
            let rows: Vec<Vec<String>> = gaps
                .iter()
                .enumerate()
                .map(|(k, g)| vec![(k + 1).to_string(), num(*g)])
                .collect();
            csv_to(out, det, &["n", "gap"], &rows)?;
            Ok(format!("gap={}", num(gaps[gaps.len() - 1])))
        }
        Suite::Quasi => {
            need(a.n >= 1, "--n must be at least 1")?;
            let seq = GreedySequence::build(dist, a.n);
            let mut rows = Vec::new();
            let mut last = f64::NAN;
            let mut k = 1;
            while (1usize << k) - 1 <= a.n {
                let n = (1usize << k) - 1;
                let prefix =
                    GreedySequence::from_points(dist, &seq.points()[..n]).expect("valid prefix");
                last = user(quasi_stationarity_ratio(&prefix, a.r, a.rho))?;
                rows.push(vec![n.to_string(), num(last)]);
                k += 1;
            }
            csv_to(out, det, &["n", "ratio"], &rows)?;
            Ok(format!("ratio={}", num(last)))
        }
    }
}

/// 1, 2, 5, 10, 20, 50, … below `n`, then `n`.
fn checkpoints(n: usize) -> Vec<usize> {
    let mut v = Vec::new();
    let mut scale = 1;
    'outer: loop {
        for m in [1, 2, 5] {
            if m * scale >= n {
                break 'outer;
            }
            v.push(m * scale);
        }
        scale *= 10;
    }
    v.push(n);
    v
}

fn price(a: &PriceArgs, seed: u64, out: Option<&Path>, det: bool) -> Result<String> {
    need(a.n >= 1, "--n must be at least 1")?;
    match a.instrument {
        Instrument::Call1d => {
            let rule = match a.method {
                PriceMethod::Greedy => CallRule::Greedy,
                PriceMethod::GreedyUniform => CallRule::GreedyUniform,
                PriceMethod::VdcWeighted => CallRule::VdcWeighted,
                PriceMethod::VdcUniform => CallRule::VdcUniform,
                _ => {
                    return Err(Usage(
                        "call1d supports greedy, greedy-uniform, vdc-weighted and vdc-uniform"
                            .into(),
                    )
                    .into())
                }
            };
            let p = BsParams::reference_call();
            let exact = bs_call_closed_form(p.spot, p.strike, p.rate, p.vol, p.maturity);
            let mut rows = Vec::new();
            let mut last = f64::NAN;
            for n in checkpoints(a.n) {
                let (z, w) = call_rule(rule, n)?;
                last = price_call_1d(&z, &w, &p)?;
                rows.push(vec![n.to_string(), num(last), num((last - exact).abs())]);
            }
            csv_to(out, det, &["n", "price", "abs_error_vs_reference"], &rows)?;
            Ok(format!(
                "price={} reference={} abs_error={}",
                num(last),
                num(exact),
                num((last - exact).abs())
            ))
        }
        Instrument::Basket3d => {
            let b = BasketParams::reference_basket();
            if a.method == PriceMethod::Mc {
                let est = price_basket_mc(&b, a.n, seed, true)?;
                let rows = vec![vec![a.n.to_string(), num(est.price), num(est.stderr)]];
                csv_to(out, det, &["n", "price", "stderr"], &rows)?;
                return Ok(format!(
                    "price={} stderr={}",
                    num(est.price),
                    num(est.stderr)
                ));
            }
            need(a.mc_samples >= 1, "--mc-samples must be at least 1")?;
            let reference = price_basket_mc(&b, a.mc_samples, seed, true)?;
            let err = |p: f64| (p - reference.price).abs();
            let (rows, last) = match a.method {
                PriceMethod::Product => {
                    let levels = price_basket_product_levels(&b, a.n, |_, _| {})?;
                    let rows: Vec<Vec<String>> = levels
                        .iter()
                        .map(|l| {
                            vec![
                                l.n.to_string(),
                                num(l.full),
                                num(err(l.full)),
                                num(l.recursive),
                            ]
                        })
                        .collect();
                    (rows, levels.last().expect("at least one level").full)
                }
                PriceMethod::Boxmuller => {
                    let mut pre = box_muller_preimage(3)?;
                    let mut rows = Vec::new();
                    let mut last = f64::NAN;
                    for n in checkpoints(a.n) {
                        pre.grow_to(n);
                        let g = box_muller_from_preimage(&pre)?;
                        last = price_basket_quant(&g, &b)?;
                        rows.push(vec![
                            g.len().to_string(),
                            num(last),
                            num(err(last)),
                            String::new(),
                        ]);
                    }
                    (rows, last)
                }
                _ => return Err(Usage("basket3d supports product, boxmuller and mc".into()).into()),
            };
            csv_to(
                out,
                det,
                &["n", "price", "abs_error_vs_reference", "recursive_price"],
                &rows,
            )?;
            Ok(format!(
                "price={} reference={} reference_stderr={} abs_error={}",
                num(last),
                num(reference.price),
                num(reference.stderr),
                num(err(last))
            ))
        }
    }
}
