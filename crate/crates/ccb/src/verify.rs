//! Named invariant suites. Each suite re-runs a family of cross-checks and
//! reports pass/fail per named check with a small payload (counterexamples
//! on failure, the computed numbers on success). Results are a pure
//! function of the options; parallel runs aggregate in canonical order, so
//! any thread count produces the same record.

use num::BigUint;
use rayon::prelude::*;
use serde_json::json;

use crate::boolfn::{all_functions, BoolFunction};
use crate::caps::SearchCaps;
use crate::cover::{ceil_log2, cover_number, nondet_cc};
use crate::decompose::{
    cube_decompose_3, decompose_separating, decompose_simple, footnote_tensor,
    induced_matrices_3, n_recursion, rank_lower_bound_flattenings, FlatteningRankProfile,
};
use crate::error::{Error, Result};
use crate::field::{rat_int, Field, Gf2, Rat};
use crate::fooling::{
    is_fooling_set, max_fooling_set, rank_vs_fooling_check, sample_fooling_function,
    union_bound_holds, union_bound_threshold,
};
use crate::formulas::{bound_formulas, superfactorial, RandomCountConstants};
use crate::latin::{
    box_count, latin_enumerate, latin_function, latin_hardness_experiment, latin_of_function,
};
use crate::partition::{all_bipartitions, Bipartition, SeparatingCollection};
use crate::protocol::{det_cc_exact, partition_argument_bound};
use crate::relation::{
    build_relation, inner_product_function, rel_det_cc_exact, silent_induced_check, KRelation,
    MaskRelation, OutputRelation, ALL_OUTPUTS,
};
use crate::tensor::{hadamard, kron, KTensor};

pub const SUITES: &[&str] = &[
    "tensor-facts",
    "certificates",
    "sandwich",
    "covers",
    "fooling",
    "sampler",
    "latin-counts",
    "fl",
    "relation",
];

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Latin-square scale knob; suites cap their own work below it.
    pub m: usize,
    pub threads: usize,
    pub seed: u64,
    pub caps: SearchCaps,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            m: 4,
            threads: 1,
            seed: 0xccb,
            caps: SearchCaps::default(),
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub details: serde_json::Value,
}

fn check(name: &str, pass: bool, details: serde_json::Value) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass,
        details,
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteResult {
    fn collect(suite: &str, checks: Vec<CheckResult>) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        SuiteResult {
            suite: suite.to_string(),
            checks,
            passed,
            failed,
        }
    }

    pub fn pass(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyRun {
    pub suites: Vec<SuiteResult>,
    pub all_pass: bool,
}

/// Runs the named suites (in the canonical order) inside a dedicated
/// thread pool of `opts.threads` workers.
pub fn run_suites(names: &[String], opts: &VerifyOptions) -> Result<VerifyRun> {
    let mut chosen: Vec<&str> = Vec::new();
    for name in names {
        if name == "all" {
            chosen = SUITES.to_vec();
            break;
        }
        let known = SUITES
            .iter()
            .find(|s| **s == name.as_str())
            .ok_or_else(|| {
                Error::parse(format!(
                    "unknown suite `{name}`; available: {} or all",
                    SUITES.join(", ")
                ))
            })?;
        if !chosen.contains(known) {
            chosen.push(known);
        }
    }
    if chosen.is_empty() {
        return Err(Error::precondition("no suites selected"));
    }
    chosen.sort_by_key(|s| SUITES.iter().position(|t| t == s));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| Error::precondition(format!("thread pool: {e}")))?;
    pool.install(|| {
        let mut suites = Vec::new();
        for name in chosen {
            suites.push(run_suite(name, opts)?);
        }
        let all_pass = suites.iter().all(|s| s.pass());
        Ok(VerifyRun { suites, all_pass })
    })
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<SuiteResult> {
    let checks = match name {
        "tensor-facts" => tensor_facts(opts),
        "certificates" => certificates(opts),
        "sandwich" => sandwich(opts),
        "covers" => covers(opts),
        "fooling" => fooling_suite(opts),
        "sampler" => sampler(opts),
        "latin-counts" => latin_counts(opts),
        "fl" => fl_suite(opts),
        "relation" => relation_suite(opts),
        other => Err(Error::parse(format!("unknown suite `{other}`"))),
    }?;
    Ok(SuiteResult::collect(name, checks))
}

fn seeded_bool_function(shape: &[usize], seed: u64) -> BoolFunction {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let cells: usize = shape.iter().product();
    let values = (0..cells).map(|_| rng.gen_bool(0.5)).collect();
    BoolFunction::new(shape.to_vec(), values).expect("valid shape")
}

fn seeded_rat_tensor(shape: &[usize], seed: u64) -> KTensor<Rat> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    KTensor::from_fn(shape.to_vec(), |_| rat_int(rng.gen_range(-2..=2))).expect("valid shape")
}

fn seeded_gf2_tensor(shape: &[usize], seed: u64) -> KTensor<Gf2> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    KTensor::from_fn(shape.to_vec(), |_| Gf2(rng.gen_bool(0.5))).expect("valid shape")
}

fn tensor_facts(_opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    // 2x3x5 with entries 1..30 flattened by grouping the first two axes
    let t = KTensor::<Rat>::from_fn(vec![2, 3, 5], |idx| {
        rat_int((idx[0] * 15 + idx[1] * 5 + idx[2] + 1) as i64)
    })?;
    let flat = t.flatten(&[vec![0, 1], vec![2]])?;
    checks.push(check(
        "flatten-2x3x5-shape",
        flat.shape() == [6, 5],
        json!({"shape": flat.shape()}),
    ));
    let mut before: Vec<String> = t.values().iter().map(|v| v.render()).collect();
    let mut after: Vec<String> = flat.values().iter().map(|v| v.render()).collect();
    before.sort();
    after.sort();
    checks.push(check(
        "flatten-2x3x5-multiset",
        before == after,
        json!({"cells": before.len()}),
    ));
    let rank = flat.matrix_rank()?;
    checks.push(check(
        "flatten-2x3x5-rank",
        rank == 2,
        json!({"rank": rank}),
    ));

    // rank is multiplicative under kron, submultiplicative under hadamard
    let a = KTensor::new(
        vec![2, 2],
        vec![rat_int(1), rat_int(2), rat_int(3), rat_int(4)],
    )?;
    let ones = KTensor::from_fn(vec![2, 2], |_| rat_int(1))?;
    let kr = kron(&a, &ones)?;
    let (ra, rk) = (a.matrix_rank()?, kr.matrix_rank()?);
    checks.push(check(
        "kron-rank-multiplicative",
        rk == ra * ones.matrix_rank()?,
        json!({"rank_a": ra, "rank_kron": rk}),
    ));
    let h = hadamard(&a, &a)?;
    let rh = h.matrix_rank()?;
    checks.push(check(
        "hadamard-rank-bound",
        rh <= ra * ra,
        json!({"rank_a": ra, "rank_hadamard": rh}),
    ));

    // flattening rank never exceeds the matching axis-size products
    let g = seeded_gf2_tensor(&[2, 3, 2], 5);
    let mut ok = true;
    for p in all_bipartitions(3) {
        let r = g.flattening_rank(&p)?;
        let rows: usize = p.left().iter().map(|&i| g.shape()[i]).product();
        let cols: usize = p.right().iter().map(|&i| g.shape()[i]).product();
        ok &= r <= rows.min(cols);
    }
    checks.push(check("flattening-rank-dims", ok, json!({"shape": [2, 3, 2]})));
    Ok(checks)
}

fn remark_collection() -> SeparatingCollection {
    let p1 = Bipartition::new(4, &[0, 1], &[2, 3]).expect("valid");
    let p2 = Bipartition::new(4, &[0, 2], &[1, 3]).expect("valid");
    SeparatingCollection::new(4, vec![p1, p2]).expect("separating")
}

fn certificates(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    // the y=z indicator cube: first induced matrix collapses to rank 1
    let foot = footnote_tensor::<Rat>(4);
    let cert = cube_decompose_3(&foot)?;
    let (m1, _, _) = induced_matrices_3(&foot)?;
    let r1 = m1.matrix_rank()?;
    checks.push(check(
        "footnote-m4-cube-certificate",
        cert.terms() <= 4 && r1 == 1,
        json!({"terms": cert.terms(), "bound": cert.bound.to_string(), "rank_m1": r1}),
    ));

    // seeded random cubes, both fields: construction validates bound and
    // reconstruction, so survival of the constructor is the check
    let cube_results: Vec<(u64, std::result::Result<(usize, usize), String>)> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let seed = opts.seed.wrapping_add(i);
            let run = || -> Result<(usize, usize)> {
                let tq = seeded_rat_tensor(&[3, 3, 3], seed);
                let cq = cube_decompose_3(&tq)?;
                let tg = seeded_gf2_tensor(&[3, 3, 3], seed);
                let cg = cube_decompose_3(&tg)?;
                Ok((cq.terms(), cg.terms()))
            };
            (seed, run().map_err(|e| e.to_string()))
        })
        .collect();
    let cube_failures: Vec<_> = cube_results
        .iter()
        .filter_map(|(s, r)| r.as_ref().err().map(|e| json!({"seed": s, "error": e})))
        .collect();
    let max_terms = cube_results
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().map(|(a, b)| *a.max(b)))
        .max()
        .unwrap_or(0);
    checks.push(check(
        "cube-certificates-random",
        cube_failures.is_empty(),
        json!({"tensors": 100, "fields": ["q", "gf2"], "max_terms": max_terms,
               "failures": cube_failures}),
    ));

    // separating and single-axis certificates on seeded cubes; sizes must
    // dominate every flattening rank
    let sep_results: Vec<(u64, std::result::Result<(), String>)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let seed = opts.seed.wrapping_add(1000 + i);
            let k4 = i >= 25;
            let run = || -> Result<()> {
                let shape: &[usize] = if k4 { &[2, 2, 2, 2] } else { &[2, 2, 2] };
                let collection = if k4 {
                    remark_collection()
                } else {
                    SeparatingCollection::singletons_vs_rest(3)
                };
                let tq = seeded_rat_tensor(shape, seed);
                let low = rank_lower_bound_flattenings(&tq, None)?.value;
                if !tq.is_zero() {
                    let cs = decompose_separating(&tq, &collection)?;
                    let cp = decompose_simple(&tq)?;
                    if cs.terms() < low || cp.terms() < low {
                        return Err(Error::invariant(format!(
                            "certificate smaller than flattening rank {low}"
                        )));
                    }
                }
                let tg = seeded_gf2_tensor(shape, seed);
                if !tg.is_zero() {
                    let low = rank_lower_bound_flattenings(&tg, None)?.value;
                    let cs = decompose_separating(&tg, &collection)?;
                    let cp = decompose_simple(&tg)?;
                    if cs.terms() < low || cp.terms() < low {
                        return Err(Error::invariant(format!(
                            "certificate smaller than flattening rank {low}"
                        )));
                    }
                }
                Ok(())
            };
            (seed, run().map_err(|e| e.to_string()))
        })
        .collect();
    let sep_failures: Vec<_> = sep_results
        .iter()
        .filter_map(|(s, r)| r.as_ref().err().map(|e| json!({"seed": s, "error": e})))
        .collect();
    checks.push(check(
        "separating-certificates-random",
        sep_failures.is_empty(),
        json!({"tensors": 50, "shapes": ["2x2x2", "2x2x2x2"], "failures": sep_failures}),
    ));

    // the two-member 4-player recursion lands on d1^2 d2^2 exactly
    let mut rec_ok = true;
    let mut rec_values = Vec::new();
    for (d1, d2) in [(2u32, 3u32), (3, 2)] {
        let profile = FlatteningRankProfile::new(
            remark_collection(),
            vec![BigUint::from(d1), BigUint::from(d2)],
        )?;
        let (value, _) = n_recursion(&profile);
        rec_values.push(value.to_string());
        rec_ok &= value == BigUint::from(36u32);
    }
    checks.push(check(
        "n-recursion-36",
        rec_ok,
        json!({"bounds": [[2, 3], [3, 2]], "values": rec_values}),
    ));
    Ok(checks)
}

/// One record per function on the 2x2x2 cube, computed independently of
/// the inequality checks that consume them.
struct SandwichRow {
    code: usize,
    depth: u32,
    lpar: u32,
    max_rank: usize,
    nondet_bits: u32,
    part_bits: u32,
    t_max: usize,
}

fn sandwich(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let caps = &opts.caps;
    let functions: Vec<BoolFunction> = all_functions(vec![2, 2, 2])?.collect();
    let rows: Vec<Result<SandwichRow>> = functions
        .par_iter()
        .enumerate()
        .map(|(code, f)| -> Result<SandwichRow> {
            let depth = det_cc_exact(f, caps)?.value;
            let lpar = partition_argument_bound(f, caps)?.value;
            let tensor = f.to_tensor::<Rat>();
            let mut max_rank = 0usize;
            for p in all_bipartitions(3) {
                max_rank = max_rank.max(tensor.flattening_rank(&p)?);
            }
            let nd = nondet_cc(f, caps)?;
            let part_bits = nd.zero.bits.max(nd.one.bits);
            let t_max = max_fooling_set(f, false, caps)?
                .size
                .max(max_fooling_set(f, true, caps)?.size);
            Ok(SandwichRow {
                code,
                depth,
                lpar,
                max_rank,
                nondet_bits: nd.total_bits,
                part_bits,
                t_max,
            })
        })
        .collect();
    let mut log_rank_bad = Vec::new();
    let mut lpar_bad = Vec::new();
    let mut nondet_bad = Vec::new();
    let mut fooling_bad = Vec::new();
    for row in &rows {
        let row = row.as_ref().map_err(|e| Error::invariant(e.to_string()))?;
        if ceil_log2(row.max_rank as u64) > row.depth {
            log_rank_bad.push(row.code);
        }
        if row.lpar > row.depth {
            lpar_bad.push(row.code);
        }
        if row.nondet_bits > row.part_bits + 1 {
            nondet_bad.push(row.code);
        }
        if ceil_log2(row.t_max as u64) > row.depth {
            fooling_bad.push(row.code);
        }
    }
    Ok(vec![
        check(
            "log-rank-below-depth",
            log_rank_bad.is_empty(),
            json!({"functions": rows.len(), "violations": log_rank_bad}),
        ),
        check(
            "partition-bound-below-depth",
            lpar_bad.is_empty(),
            json!({"functions": rows.len(), "violations": lpar_bad}),
        ),
        check(
            "nondet-total-below-parts-plus-one",
            nondet_bad.is_empty(),
            json!({"functions": rows.len(), "violations": nondet_bad}),
        ),
        check(
            "fooling-size-below-depth",
            fooling_bad.is_empty(),
            json!({"functions": rows.len(), "violations": fooling_bad}),
        ),
    ])
}

fn covers(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let caps = &opts.caps;
    let mut checks = Vec::new();

    // two-party non-equality at the 1-bit scale: two boxes, one bit
    let ne = BoolFunction::from_fn(vec![2, 2], |i| i[0] != i[1])?;
    let c1 = cover_number(&ne, true, caps)?;
    checks.push(check(
        "ne-one-cover-baseline",
        c1.count == 2 && c1.bits == 1,
        json!({"count": c1.count, "bits": c1.bits}),
    ));

    // seeded cubes: totals add, one extra bit covers both colors
    let mut totals_ok = true;
    let mut worst = json!(null);
    for i in 0..20u64 {
        let f = seeded_bool_function(&[3, 3, 2], opts.seed.wrapping_add(2000 + i));
        let nd = nondet_cc(&f, caps)?;
        let add = nd.total_count == nd.zero.count + nd.one.count;
        let bits = nd.total_bits <= nd.zero.bits.max(nd.one.bits) + 1;
        if !(add && bits) {
            totals_ok = false;
            worst = json!({"seed": opts.seed.wrapping_add(2000 + i)});
        }
    }
    checks.push(check(
        "cover-totals-add",
        totals_ok,
        json!({"functions": 20, "failure": worst}),
    ));

    // every box is three nonempty subsets, so (2^m - 1)^3 boxes and at
    // most 2^(3mt) covers of size t; exhaustive at m = 2
    let m = 2usize;
    let subsets = 1u64 << m;
    let mut boxes = 0u64;
    for _ in 1..subsets {
        for _ in 1..subsets {
            for _ in 1..subsets {
                boxes += 1;
            }
        }
    }
    let formula = box_count(m as u64);
    let singles = BigUint::from(boxes);
    let pairs = BigUint::from(boxes * (boxes - 1) / 2);
    let b1 = bound_formulas(m as u64, 1, 1, RandomCountConstants::default()).cover_count;
    let b2 = bound_formulas(m as u64, 2, 1, RandomCountConstants::default()).cover_count;
    checks.push(check(
        "cover-count-formula-m2",
        BigUint::from(boxes) == formula && singles <= b1 && pairs <= b2,
        json!({"boxes": boxes, "pairs": (boxes * (boxes - 1) / 2),
               "bound_t1": b1.to_string(), "bound_t2": b2.to_string()}),
    ));

    // box census stays under the all-subsets count as the cube grows
    let mut census_ok = true;
    for mm in 1..=6u64 {
        census_ok &= box_count(mm) < bound_formulas(mm, 1, 1, RandomCountConstants::default()).cover_count;
    }
    checks.push(check("box-census-below-formula", census_ok, json!({"m": [1, 6]})));

    // superfactorial^4 vs 2^(m^2): false through m=2, true from m=3 on
    let beats: Vec<bool> = (1..=6).map(crate::formulas::latin_lower_beats_quarter_square).collect();
    checks.push(check(
        "latin-lower-vs-quarter-square",
        beats == [false, false, true, true, true, true],
        json!({"m1_to_m6": beats}),
    ));
    Ok(checks)
}

fn fooling_suite(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let caps = &opts.caps;
    let functions: Vec<BoolFunction> = all_functions(vec![2, 2, 2])?.collect();
    let rows: Vec<Result<(usize, bool, bool, bool)>> = functions
        .par_iter()
        .enumerate()
        .map(|(code, f)| -> Result<(usize, bool, bool, bool)> {
            let depth = det_cc_exact(f, caps)?.value;
            let mut hadamard_ok = true;
            let mut rank_ok = true;
            let mut depth_ok = true;
            for b in [false, true] {
                let best = max_fooling_set(f, b, caps)?;
                if best.size == 0 {
                    continue;
                }
                let report = rank_vs_fooling_check(f, &best.set, b)?;
                hadamard_ok &= report.hadamard_is_identity;
                let six = BigUint::from(report.max_flattening_rank).pow(6);
                rank_ok &= report.rank_product >= BigUint::from(best.size)
                    && six >= BigUint::from(best.size);
                depth_ok &= ceil_log2(best.size as u64) <= depth;
            }
            Ok((code, hadamard_ok, rank_ok, depth_ok))
        })
        .collect();
    let mut hadamard_bad = Vec::new();
    let mut rank_bad = Vec::new();
    let mut depth_bad = Vec::new();
    for row in &rows {
        let (code, h, r, d) = row.as_ref().map_err(|e| Error::invariant(e.to_string()))?;
        if !h {
            hadamard_bad.push(*code);
        }
        if !r {
            rank_bad.push(*code);
        }
        if !d {
            depth_bad.push(*code);
        }
    }
    Ok(vec![
        check(
            "hadamard-product-is-identity",
            hadamard_bad.is_empty(),
            json!({"functions": rows.len(), "violations": hadamard_bad}),
        ),
        check(
            "rank-sixth-power-covers-size",
            rank_bad.is_empty(),
            json!({"functions": rows.len(), "violations": rank_bad}),
        ),
        check(
            "fooling-depth-bound",
            depth_bad.is_empty(),
            json!({"functions": rows.len(), "violations": depth_bad}),
        ),
    ])
}

fn sampler(_opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let n = 2u32;
    let side = 1usize << n;
    let results: Vec<Result<(u64, bool, bool)>> = (0..100u64)
        .into_par_iter()
        .map(|seed| -> Result<(u64, bool, bool)> {
            let f = sample_fooling_function(n, seed)?;
            let diag: Vec<Vec<usize>> = (0..side).map(|v| vec![v, v, v]).collect();
            let fool = is_fooling_set(&f, &diag, true)?;
            let diag_ok = fool.valid && diag.iter().all(|c| f.value(c).unwrap());
            let mut pair_ok = true;
            for v1 in 0..side {
                for v2 in v1 + 1..side {
                    let cells = [
                        [v1, v1, v2],
                        [v1, v2, v1],
                        [v2, v1, v1],
                        [v1, v2, v2],
                        [v2, v1, v2],
                        [v2, v2, v1],
                    ];
                    let zeros = cells
                        .iter()
                        .filter(|c| !f.value(c.as_slice()).unwrap())
                        .count();
                    pair_ok &= zeros == 1;
                }
            }
            Ok((seed, diag_ok, pair_ok))
        })
        .collect();
    let mut diag_bad = Vec::new();
    let mut pair_bad = Vec::new();
    for row in &results {
        let (seed, diag_ok, pair_ok) =
            row.as_ref().map_err(|e| Error::invariant(e.to_string()))?;
        if !diag_ok {
            diag_bad.push(*seed);
        }
        if !pair_ok {
            pair_bad.push(*seed);
        }
    }
    let mut checks = vec![
        check(
            "diagonal-fools",
            diag_bad.is_empty(),
            json!({"samples": 100, "n": n, "violations": diag_bad}),
        ),
        check(
            "one-zero-per-pair-class",
            pair_bad.is_empty(),
            json!({"samples": 100, "n": n, "violations": pair_bad}),
        ),
    ];
    let threshold = union_bound_threshold(1, 2048);
    let t_ok = match threshold {
        Some(t) => union_bound_holds(1, t) && (t == 3 || !union_bound_holds(1, t - 1)),
        None => false,
    };
    checks.push(check(
        "union-bound-threshold-exists",
        t_ok,
        json!({"n": 1, "threshold": threshold}),
    ));
    Ok(checks)
}

fn latin_counts(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let expected: [u64; 5] = [1, 2, 12, 576, 161280];
    let top = opts.m.clamp(1, 5);
    let mut counts_ok = true;
    let mut listed = Vec::new();
    for m in 1..=top {
        let squares = latin_enumerate(m)?;
        let count = squares.len() as u64;
        let floor = superfactorial(m as u64);
        counts_ok &= count == expected[m - 1] && BigUint::from(count) >= floor;
        listed.push(json!({"m": m, "count": count, "floor": floor.to_string()}));
    }
    Ok(vec![check(
        "enumeration-counts-and-floor",
        counts_ok,
        json!({"levels": listed}),
    )])
}

fn canonical_cover(cover: &crate::cover::BoxCover) -> String {
    let mut parts: Vec<String> = cover.boxes.iter().map(|b| b.render()).collect();
    parts.sort();
    parts.join(";")
}

fn fl_suite(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let caps = &opts.caps;
    let mut checks = Vec::new();
    let top = opts.m.clamp(2, 4);

    // every square's function carries the one-zero-per-line structure and
    // rebuilds its square
    let mut structure_ok = true;
    let mut structure_detail = Vec::new();
    for m in 2..=top {
        let squares = latin_enumerate(m)?;
        let bad: Vec<usize> = squares
            .par_iter()
            .enumerate()
            .map(|(i, l)| -> Result<Option<usize>> {
                let f = latin_function(l)?;
                let ok = unique_zero_ok(&f)? && &latin_of_function(&f)? == l;
                Ok(if ok { None } else { Some(i) })
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        structure_ok &= bad.is_empty();
        structure_detail.push(json!({"m": m, "squares": squares.len(), "violations": bad}));
    }
    checks.push(check(
        "unique-zero-structure",
        structure_ok,
        json!({"levels": structure_detail}),
    ));

    // distinct squares stay distinct as functions and as minimal covers
    let mut distinct_ok = true;
    let mut distinct_detail = Vec::new();
    for m in 2..=top.min(3) {
        let squares = latin_enumerate(m)?;
        let mut tables = std::collections::HashSet::new();
        let mut covers = std::collections::HashSet::new();
        for l in &squares {
            let f = latin_function(l)?;
            tables.insert(f.values().to_vec());
            covers.insert(canonical_cover(&cover_number(&f, true, caps)?.cover));
        }
        distinct_ok &= tables.len() == squares.len() && covers.len() == squares.len();
        distinct_detail.push(json!({
            "m": m, "squares": squares.len(),
            "distinct_tables": tables.len(), "distinct_covers": covers.len()
        }));
    }
    checks.push(check(
        "distinct-squares-distinct-covers",
        distinct_ok,
        json!({"levels": distinct_detail}),
    ));

    // hardness sweep at the exhaustive scale
    let hm = opts.m.clamp(2, 3);
    let hard = latin_hardness_experiment(hm, caps)?;
    let hist_total: usize = hard.histogram.values().sum();
    checks.push(check(
        "hardness-threshold-met",
        hard.threshold_met && hist_total == hard.squares,
        json!({"m": hm, "squares": hard.squares, "max_cover": hard.max_cover,
               "threshold": hard.threshold, "histogram_total": hist_total}),
    ));
    Ok(checks)
}

fn unique_zero_ok(f: &BoolFunction) -> Result<bool> {
    crate::latin::unique_zero_per_column(f)
}

fn relation_suite(opts: &VerifyOptions) -> Result<Vec<CheckResult>> {
    let caps = &opts.caps;
    let mut checks = Vec::new();
    let ip = inner_product_function(1)?;
    let r: KRelation = build_relation(ip.clone(), ip.clone(), ip)?;

    let silent = silent_induced_check(&r)?;
    let mut witness_ok = silent.all_induced_silent && silent.partitions.len() == 3;
    for q in &silent.partitions {
        match &q.answer.witness {
            Some(w) => witness_ok &= w.verify(&r).is_ok(),
            None => witness_ok = false,
        }
    }
    checks.push(check(
        "every-split-answers-silently",
        witness_ok,
        json!({"partitions": silent.partitions.len()}),
    ));

    // exhaustive scan: no single output works everywhere, so the relation
    // itself costs communication
    let mut acc = ALL_OUTPUTS;
    let full = crate::boolfn::KBox::full(r.shape())?;
    full.for_each_cell(|idx| {
        acc &= r.valid_mask(idx).expect("cell in range");
    });
    let d = rel_det_cc_exact(&r, caps)?;
    let verified = d.tree.verify(&r).is_ok();
    checks.push(check(
        "no-silent-global-answer",
        acc == 0 && d.value > 0 && verified,
        json!({"common_mask": acc, "value": d.value}),
    ));

    // dropping options can only make the relation harder
    let dense = MaskRelation::from_relation(&r)?;
    let base = rel_det_cc_exact(&dense, caps)?.value;
    let mut mono_ok = true;
    let mut restricted = Vec::new();
    for i in 0..3u64 {
        let tight = dense.restrict_random(opts.seed.wrapping_add(i));
        let v = rel_det_cc_exact(&tight, caps)?.value;
        restricted.push(v);
        mono_ok &= v >= base;
    }
    checks.push(check(
        "restriction-monotone",
        mono_ok,
        json!({"base": base, "restricted": restricted}),
    ));
    Ok(checks)
}
