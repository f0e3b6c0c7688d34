use std::io::{Read, Write};
use std::path::Path;

use homforge::deform::io::{
    ConjugationFile, DeformationFile, FormalIsomorphismFile, LinearSeriesFile, TensorRows,
    TwistingFile,
};
use homforge::deform::{self, Bilinear, DefectSeries, DeformationTriple};
use homforge::harness::{self, HarnessReport};
use homforge::identities::hom_associativity_violation;
use homforge::search::{self, AlphaFilter, DegeneracyFilter, SearchConstraints, TwistFilter};
use homforge::{alpha_properties, degeneracy_report, is_twist, FiniteHomStructure};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::error::CliError;

type Out<'a> = &'a mut dyn Write;

pub fn dispatch(cmd: Command, out: Out) -> Result<u8, CliError> {
    match cmd {
        Command::Check(a) => check(a, out),
        Command::Search(a) => search(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Deform(d) => deform(d, out),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn parse<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

fn emit(out: Out, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn check(a: CheckArgs, out: Out) -> Result<u8, CliError> {
    let h: FiniteHomStructure = parse(&a.input)?;
    let violation = hom_associativity_violation(&h);
    let mut report = json!({
        "hom_associative": violation.is_none(),
        "violation": violation.map(|(x, y, z)| [x, y, z]),
        "alpha": alpha_properties(&h),
        "degeneracy": degeneracy_report(&h),
    });
    if a.twist {
        let untwist = is_twist(&h)?;
        report["twist"] = json!({
            "is_twist": untwist.is_some(),
            "untwist": untwist,
        });
    }
    emit(out, &report)?;
    Ok(u8::from(violation.is_some()))
}

fn parse_alpha(s: &str) -> Result<AlphaFilter, CliError> {
    match s {
        "any" => Ok(AlphaFilter::Any),
        "surjective" => Ok(AlphaFilter::Surjective),
        "identity" => Ok(AlphaFilter::Identity),
        _ => {
            let list = s
                .strip_prefix("fixed:")
                .ok_or_else(|| CliError::input(format!("unknown alpha filter {s:?}")))?;
            list.split(',')
                .map(|v| v.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map(AlphaFilter::Fixed)
                .map_err(|e| CliError::input(format!("bad fixed alpha {list:?}: {e}")))
        }
    }
}

fn search(a: SearchArgs, out: Out) -> Result<u8, CliError> {
    let c = SearchConstraints::new(a.size)
        .hom_associative(!a.no_hom_assoc)
        .alpha(parse_alpha(&a.alpha)?)
        .degeneracy(match a.degeneracy {
            DegeneracyArg::Any => DegeneracyFilter::Any,
            DegeneracyArg::Strong => DegeneracyFilter::StronglyDegenerate,
            DegeneracyArg::NotStrong => DegeneracyFilter::NotStronglyDegenerate,
        })
        .twist(match a.twist {
            TwistArg::Any => TwistFilter::Any,
            TwistArg::Twist => TwistFilter::Twist,
            TwistArg::NonTwist => TwistFilter::NonTwist,
        })
        .canonical(a.canonical);
    if a.count {
        emit(out, &json!({"count": search::count(&c)?, "constraints": c}))?;
        return Ok(0);
    }
    if a.hunt {
        return match search::hunt(&c)? {
            Some(h) => emit(out, &h).map(|_| 0),
            None => Ok(u8::from(a.expect)),
        };
    }
    for h in search::enumerate(&c)? {
        emit(out, &h)?;
    }
    Ok(0)
}

fn verify(a: VerifyArgs, out: Out) -> Result<u8, CliError> {
    let report: HarnessReport = match a.prop {
        PropArg::Dichotomy => harness::verify_twist_dichotomy(a.max_size)?,
        PropArg::Injectivity => harness::verify_twisting_injectivity(a.max_size)?,
        PropArg::Context => harness::verify_context_associativity(a.max_size)?,
        PropArg::Successor => harness::check_successor_example(a.bound, a.shift)?,
    };
    emit(out, &report)?;
    Ok(u8::from(!report.pass))
}

#[derive(Serialize)]
struct DefectSummary {
    zero: bool,
    first_nonzero_order: Option<usize>,
    nonzero_orders: Vec<usize>,
}

fn summarize(d: &DefectSeries) -> DefectSummary {
    DefectSummary {
        zero: d.is_zero(),
        first_nonzero_order: d.first_nonzero_order(),
        nonzero_orders: (0..=d.order()).filter(|&k| !d.is_zero_at(k)).collect(),
    }
}

fn nested(coeffs: &[Bilinear]) -> Vec<TensorRows> {
    coeffs.iter().map(Bilinear::nested).collect()
}

fn load_deformation(path: &Path) -> Result<DeformationTriple, CliError> {
    Ok(parse::<DeformationFile>(path)?.to_triple()?)
}

fn deform(cmd: DeformCommand, out: Out) -> Result<u8, CliError> {
    match cmd {
        DeformCommand::Check { input } => {
            let d = load_deformation(&input)?;
            let defect = summarize(&deform::hom_assoc_defect(&d));
            let zero = defect.zero;
            emit(
                out,
                &json!({"order": d.order(), "hom_associativity_defect": defect}),
            )?;
            Ok(u8::from(!zero))
        }
        DeformCommand::Untwist { input } => {
            let d = load_deformation(&input)?;
            let nu = deform::untwist_deformation(&d)?;
            emit(
                out,
                &json!({
                    "p": d.field().modulus(),
                    "dim": d.dim(),
                    "order": d.order(),
                    "associative": true,
                    "order0": nu.coeff(0).nested(),
                    "nu": nested(nu.coeffs()),
                }),
            )?;
            Ok(0)
        }
        DeformCommand::Twist { input } => {
            let (alpha, star) = parse::<TwistingFile>(&input)?.to_series()?;
            let d = deform::twist_deformation(&alpha, &star)?;
            emit(out, &DeformationFile::from_triple(&d))?;
            Ok(0)
        }
        DeformCommand::Invert { input } => {
            let s = parse::<LinearSeriesFile>(&input)?.to_series()?;
            emit(out, &LinearSeriesFile::from_series(&s.invert()?))?;
            Ok(0)
        }
        DeformCommand::Equiv { phi, first, second } => {
            let (d1, d2) = (load_deformation(&first)?, load_deformation(&second)?);
            let phi = parse::<FormalIsomorphismFile>(&phi)?.to_isomorphism(d1.field(), d1.dim())?;
            let equivalent = deform::equivalence_check(&phi, &d1, &d2)?;
            emit(out, &json!({"equivalent": equivalent}))?;
            Ok(u8::from(!equivalent))
        }
        DeformCommand::Transport { phi, input } => {
            let d = load_deformation(&input)?;
            let phi = parse::<FormalIsomorphismFile>(&phi)?.to_isomorphism(d.field(), d.dim())?;
            let moved = deform::transport_deformation(&phi, &d)?;
            emit(out, &DeformationFile::from_triple(&moved))?;
            Ok(0)
        }
        DeformCommand::Conjugate { input } => {
            let (phi, source, mul_prime) = parse::<ConjugationFile>(&input)?.to_parts()?;
            let mul_prime = match mul_prime {
                Some(m) => m,
                None => deform::transport_multiplication(&phi, source.mul())?,
            };
            let c = deform::conjugate_twist(&phi, &source, &mul_prime)?;
            emit(
                out,
                &json!({
                    "mul_prime": c.twisting.mul().nested(),
                    "alpha_prime": c.twisting.alpha().rows(),
                    "star_prime": c.hom_algebra.mul().nested(),
                }),
            )?;
            Ok(0)
        }
        DeformCommand::Nondeg {
            input,
            trials,
            seed,
        } => {
            let d = load_deformation(&input)?;
            let r = deform::nondegeneracy_preserved_check(&d, trials, seed)?;
            emit(out, &json!({"passed": r.passed(), "report": r}))?;
            Ok(u8::from(!r.passed()))
        }
    }
}
