use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use locq::codes::{SquareComplex, StabilizerCode, SubdividedCode};
use locq::hypergraph::{Erasure, PauliXError};
use locq::io::{Code, CodeKind, CodeParams, ErrorFile, FORMAT_VERSION};
use locq::sim::{
    bench_scaling, hoeffding_bound, mwpm_path_bound, run_trials, GenUfTrial, NoiseModel, PeelTrial, RepMwpmTrial,
    ScalingFamily, SubdividedTrial, SweepRow, TrialDecoder, TrivialTrial, UfTrial,
};
use locq::subdivided::{BruteForceOuter, OuterDecoder, PatchMode, SubdividedStats};
use serde::Serialize;

use crate::ranges;
use crate::{BenchArgs, BuildArgs, DecodeArgs, DecoderArg, Failure, FamilyArg, KindArg, SweepArgs};

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout()),
    })
}

fn toric_outer(text: &str) -> Result<SquareComplex, Failure> {
    let (w, h) = ranges::toric(text)?;
    Ok(SquareComplex::toric(w, h)?)
}

pub fn build(a: BuildArgs) -> Result<(), Failure> {
    let kind = match a.kind {
        KindArg::GenRep => CodeKind::GenRep,
        KindArg::GenSurface => CodeKind::GenSurface,
        KindArg::Planar => CodeKind::Planar,
        KindArg::Subdivided => CodeKind::Subdivided,
    };
    let outer = match (kind, &a.outer) {
        (CodeKind::Subdivided, Some(s)) => Some(toric_outer(s)?),
        (CodeKind::Subdivided, None) => return Err(Failure::usage("--kind subdivided needs --outer toric:W,H")),
        _ => None,
    };
    if matches!(kind, CodeKind::GenRep | CodeKind::GenSurface) && a.delta.is_none() {
        return Err(Failure::usage(format!("--kind {} needs --delta", kind.name())));
    }
    if a.length.is_multiple_of(2) {
        return Err(Failure::usage(format!("--length must be odd, got {}", a.length)));
    }
    let code = Code::build(kind, &CodeParams { delta: a.delta, delta_b: a.delta_b, length: a.length, outer })?;
    if let Some(path) = &a.out {
        code.save(path)?;
    }
    let census = code.census();
    println!("{}", serde_json::to_string_pretty(&census)?);
    Ok(())
}

fn trial_decoder<'a>(
    code: &'a Code,
    which: DecoderArg,
    outer: Option<&'a BruteForceOuter>,
    mode: PatchMode,
) -> Result<Box<dyn TrialDecoder + 'a>, Failure> {
    let mismatch = || Failure::mismatch(format!("decoder {which:?} does not apply to a {} code", code.kind().name()));
    let pairwise = |c: &'a dyn StabilizerCode| (c.graph().max_arity() <= 2).then_some(c);
    Ok(match (which, code) {
        (DecoderArg::RepMwpm, Code::GenRep(c)) => Box::new(RepMwpmTrial { code: c }),
        (DecoderArg::GenUf, Code::GenSurface(p)) => Box::new(GenUfTrial { patch: p }),
        (DecoderArg::Subdivided, Code::Subdivided(c)) => {
            Box::new(SubdividedTrial { code: c, outer: outer.ok_or_else(mismatch)?, mode })
        }
        (DecoderArg::Peel, _) => {
            Box::new(PeelTrial { code: code.stabilizer().and_then(pairwise).ok_or_else(mismatch)? })
        }
        (DecoderArg::Uf, _) => Box::new(UfTrial { code: code.stabilizer().and_then(pairwise).ok_or_else(mismatch)? }),
        (DecoderArg::Trivial, _) => Box::new(TrivialTrial::new(code.stabilizer().ok_or_else(mismatch)?)),
        _ => return Err(mismatch()),
    })
}

#[derive(Serialize)]
struct StageReport {
    patch_correction: Vec<usize>,
    t_correction: Vec<usize>,
    outer_correction: Vec<usize>,
    stats: SubdividedStats,
}

#[derive(Serialize)]
struct DecodeReport {
    format_version: u32,
    code_kind: &'static str,
    decoder: &'static str,
    error: Vec<usize>,
    erasure: Vec<usize>,
    syndrome_weight: usize,
    correction: Vec<usize>,
    residual_syndrome_empty: bool,
    failure: bool,
    ops: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    stages: Option<StageReport>,
}

fn outer_for(code: &Code) -> Result<Option<BruteForceOuter>, Failure> {
    match code {
        Code::Subdivided(c) => Ok(Some(BruteForceOuter::new(c.outer_css())?)),
        _ => Ok(None),
    }
}

fn mode(parallel_patches: bool) -> PatchMode {
    if parallel_patches {
        PatchMode::ParallelPatches
    } else {
        PatchMode::Serial
    }
}

pub fn decode(a: DecodeArgs) -> Result<(), Failure> {
    let code = Code::load(&a.code)?;
    let outer = outer_for(&code)?;
    let decoder = trial_decoder(&code, a.decoder, outer.as_ref(), mode(a.parallel_patches))?;
    let graph = code.graph();
    let (error, erasure): (PauliXError, Erasure) = match (&a.error, &a.sample) {
        (Some(path), _) => ErrorFile::load(path)?.resolve(graph)?,
        (None, Some(text)) => {
            let (p, pe, seed) = ranges::sample(text)?;
            let noise = NoiseModel::new(p, pe, seed.or(a.seed).unwrap_or(0))?;
            noise.sample(graph.num_edges(), 0)
        }
        (None, None) => return Err(Failure::usage("give --error or --sample")),
    };
    let syndrome = graph.syndrome_of(&error);
    let decoded = decoder.decode(&erasure, &syndrome)?;
    let residual = decoded.correction.sym_diff(&error);
    let residual_syndrome_empty = graph.syndrome_of(&residual).is_empty();
    let failure = if residual_syndrome_empty { decoder.is_failure(&residual)? } else { true };
    let report = DecodeReport {
        format_version: FORMAT_VERSION,
        code_kind: code.kind().name(),
        decoder: decoder.id(),
        error: error.as_slice().to_vec(),
        erasure: erasure.as_slice().to_vec(),
        syndrome_weight: syndrome.len(),
        correction: decoded.correction.as_slice().to_vec(),
        residual_syndrome_empty,
        failure,
        ops: decoded.ops,
        stages: decoded.stages.map(|s| StageReport {
            patch_correction: s.patch_correction.into_vec(),
            t_correction: s.t_correction.into_vec(),
            outer_correction: s.outer_correction,
            stats: s.stats,
        }),
    };
    let mut w = sink(a.out.as_deref())?;
    writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(())
}

fn max_t_delta(code: &SubdividedCode) -> usize {
    code.t_regions().iter().map(|t| t.code.delta()).max().unwrap_or(2)
}

pub fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let outer = toric_outer(&a.outer)?;
    let lengths = ranges::usize_list(&a.lengths)?;
    let ps = ranges::f64_range(&a.p)?;
    if a.trials == 0 {
        return Err(Failure::usage("--trials must be at least 1"));
    }
    if !matches!(a.decoder, DecoderArg::Subdivided | DecoderArg::Trivial) {
        return Err(Failure::mismatch("sweep runs the subdivided or trivial decoder"));
    }
    let seed = a.seed.unwrap_or(0);
    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    for &l in &lengths {
        let code = Code::Subdivided(SubdividedCode::new(outer.clone(), l)?);
        let brute = outer_for(&code)?;
        let decoder = trial_decoder(&code, a.decoder, brute.as_ref(), mode(a.parallel_patches))?;
        let Code::Subdivided(sub) = &code else { unreachable!() };
        for &p in &ps {
            let noise = NoiseModel::new(p, a.p_erase, seed)?;
            let summary = run_trials(decoder.as_ref(), &noise, a.trials, true)?;
            rows.push(SweepRow::from_summary(&a.outer, decoder.id(), l, &noise, &summary));
            if a.bounds {
                let r = brute.as_ref().map_or(0, |b| b.guaranteed_weight());
                let hb = hoeffding_bound(outer.num_q, r, p).unwrap_or(1.0);
                let dt = max_t_delta(sub);
                let mb = mwpm_path_bound(l, dt, dt - 1, p).unwrap_or(1.0);
                bounds.push(SweepRow::bound(&a.outer, "hoeffding", l, p, hb));
                bounds.push(SweepRow::bound(&a.outer, "mwpm_path", l, p, mb));
            }
        }
    }
    let mut w = csv::Writer::from_writer(sink(a.out.as_deref())?);
    for row in rows.iter().chain(&bounds) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct BenchRow {
    family: &'static str,
    size: usize,
    n: usize,
    wall_ns: u64,
    ops: u64,
}

#[derive(Serialize)]
struct BenchSummary {
    ops_slope: Option<f64>,
    wall_slope: Option<f64>,
    note: Option<&'static str>,
}

pub fn bench(a: BenchArgs) -> Result<(), Failure> {
    let (family, name) = match a.family {
        FamilyArg::GenUf => (ScalingFamily::GenUf, "gen-uf"),
        FamilyArg::Subdivided => (ScalingFamily::Subdivided, "subdivided"),
        FamilyArg::Uf => (ScalingFamily::Uf, "uf"),
        FamilyArg::Quadratic => (ScalingFamily::Quadratic, "quadratic"),
    };
    let sizes = ranges::usize_list(&a.sizes)?;
    let noise = NoiseModel::new(a.p, 0.0, a.seed.unwrap_or(0))?;
    let report = bench_scaling(family, &sizes, &noise, a.trials)?;
    let to_file = a.out.is_some();
    let mut w = csv::Writer::from_writer(sink(a.out.as_deref())?);
    for r in &report.rows {
        w.serialize(BenchRow { family: name, size: r.size, n: r.n, wall_ns: r.wall_ns, ops: r.ops })?;
    }
    w.flush()?;
    drop(w);
    let summary = BenchSummary {
        ops_slope: report.ops_slope,
        wall_slope: report.wall_slope,
        note: report.ops_slope.is_none().then_some("slope undefined for fewer than two sizes"),
    };
    let text = serde_json::to_string(&summary)?;
    if to_file {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    Ok(())
}
