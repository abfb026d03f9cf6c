use std::path::Path;

use arcnash::arc::{lift_orbit, monomial_arc, orbit_of_arc, special_point_is_singular, valuation_of_arc};
use arcnash::order::minimal_elements;
use arcnash::resolution::{
    avoid_ray, exceptional_rays, is_divisorial, is_regular_fan, is_subdivision, preserves_regular_faces, resolve as resolve_cone,
    resolve_2d_minimal, Fan, SubdivisionLog,
};
use arcnash::series::{
    blowup_chart_strict_transform, curve_on_hypersurface, dfm_surjective, extend_curve_to_surface,
    homogeneous_decomposition, jet_equations, line_on_cone,
};
use arcnash::{Cone, LatticeVector, LineSpec, TorusArc, TruncatedSeries};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::Value;

use crate::report::{int, vector, vectors, ConeDocument, FaceReport, Report};
use crate::{ArcArgs, CliError, GermArgs, ResolveArgs};

type Q = BigRational;
type Out = Result<String, CliError>;

fn parse_vector(text: &str, rank: usize, what: &str) -> Result<LatticeVector, CliError> {
    let coords = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<num_bigint::BigInt>()
                .map_err(|_| CliError::Input(format!("{what}: `{p}` is not an integer")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != rank {
        return Err(CliError::Input(format!(
            "{what}: expected {rank} coordinates, found {}",
            coords.len()
        )));
    }
    Ok(LatticeVector::new(coords))
}

#[derive(Serialize)]
struct ConeSummary {
    rays: Vec<Value>,
    facet_normals: Vec<Value>,
    simplicial: bool,
    regular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicity: Option<Value>,
}

fn summary(c: &Cone) -> ConeSummary {
    ConeSummary {
        rays: vectors(c.rays()),
        facet_normals: vectors(c.facet_normals()),
        simplicial: c.is_simplicial(),
        regular: c.is_regular(),
        multiplicity: c.multiplicity().ok().map(|m| int(&m)),
    }
}

#[derive(Serialize)]
struct AnalyzeResults {
    cone: ConeSummary,
    singular_faces: Vec<FaceReport>,
    parallelepiped_candidates: usize,
    candidates_in_s: usize,
    minimal_elements: Vec<Value>,
    essential_divisor_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

pub fn analyze(path: &Path) -> Out {
    let (doc, cone) = ConeDocument::load(path)?;
    let report = minimal_elements(&cone);
    let count = report.essential_divisor_count();
    let results = AnalyzeResults {
        cone: summary(&cone),
        singular_faces: cone.singular_faces().iter().map(FaceReport::new).collect(),
        parallelepiped_candidates: report.candidate_count,
        candidates_in_s: report.s_candidate_count,
        minimal_elements: vectors(&report.minimal_elements),
        essential_divisor_count: count,
        note: cone.is_regular().then_some("smooth: no essential divisors"),
    };
    Ok(Report::new("analyze", doc, results).render())
}

#[derive(Serialize)]
struct FanReport {
    rays: Vec<Value>,
    /// Each maximal cone as indices into `rays`.
    maximal_cones: Vec<Vec<usize>>,
}

fn fan_report(f: &Fan) -> FanReport {
    let rays = f.rays();
    let maximal_cones = f
        .maximal_cones()
        .iter()
        .map(|c| {
            c.rays()
                .iter()
                .map(|r| rays.binary_search(r).expect("fan ray"))
                .collect()
        })
        .collect();
    FanReport {
        rays: vectors(&rays),
        maximal_cones,
    }
}

#[derive(Serialize)]
struct StepReport {
    phase: &'static str,
    center: Value,
}

fn log_report(log: &SubdivisionLog) -> Vec<StepReport> {
    log.steps
        .iter()
        .map(|s| StepReport {
            phase: s.phase.as_str(),
            center: vector(&s.center),
        })
        .collect()
}

#[derive(Serialize)]
struct Certificates {
    subdivision: bool,
    regular: bool,
    preserves_regular_faces: bool,
    divisorial: bool,
}

fn certificates(f: &Fan, c: &Cone) -> Result<Certificates, CliError> {
    Ok(Certificates {
        subdivision: is_subdivision(f, c)?,
        regular: is_regular_fan(f),
        preserves_regular_faces: preserves_regular_faces(f, c)?,
        divisorial: is_divisorial(f, c)?,
    })
}

#[derive(Serialize)]
struct DecompositionReport {
    n1: Value,
    n2: Value,
    case: &'static str,
    v1: Value,
    v2: Value,
}

#[derive(Serialize)]
struct ResolveInputs {
    cone: ConeDocument,
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    avoid: Option<Value>,
}

#[derive(Serialize)]
struct ResolveResults {
    fan: FanReport,
    exceptional_rays: Vec<Value>,
    subdivisions: Vec<StepReport>,
    certificates: Certificates,
    #[serde(skip_serializing_if = "Option::is_none")]
    continued_fraction: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<DecompositionReport>,
}

pub fn resolve(args: &ResolveArgs) -> Out {
    let (doc, cone) = ConeDocument::load(&args.cone)?;
    let mut continued_fraction = None;
    let mut decomposition = None;
    let mut avoid = None;
    let (mode, fan, log) = if let Some(text) = &args.avoid {
        let v = parse_vector(text, cone.rank(), "--avoid")?;
        avoid = Some(vector(&v));
        let out = avoid_ray(&cone, &v)?;
        let d = &out.decomposition;
        decomposition = Some(DecompositionReport {
            n1: vector(&d.n1),
            n2: vector(&d.n2),
            case: match d.case {
                arcnash::resolution::DecompositionCase::BothInS => "both-in-s",
                arcnash::resolution::DecompositionCase::OnRay => "on-ray",
            },
            v1: vector(&d.v1),
            v2: vector(&d.v2),
        });
        ("avoid", out.fan, out.log)
    } else if args.two_dim_minimal {
        let hj = arcnash::resolution::hj_minimal_resolution_2d(&cone)?;
        continued_fraction = Some(hj.continued_fraction.iter().map(int).collect());
        let (fan, log) = resolve_2d_minimal(&cone)?;
        ("2d-minimal", fan, log)
    } else {
        let (fan, log) = resolve_cone(&cone)?;
        ("resolve", fan, log)
    };
    let results = ResolveResults {
        fan: fan_report(&fan),
        exceptional_rays: vectors(&exceptional_rays(&fan, &cone)?),
        subdivisions: log_report(&log),
        certificates: certificates(&fan, &cone)?,
        continued_fraction,
        decomposition,
    };
    let inputs = ResolveInputs { cone: doc, mode, avoid };
    Ok(Report::new("resolve", inputs, results).render())
}

#[derive(Serialize)]
struct ArcInputs {
    cone: ConeDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    monomial: Option<Value>,
    truncation_order: i64,
    lift_to_resolution: bool,
}

#[derive(Serialize)]
struct LiftReport {
    chart: Vec<Value>,
    face: FaceReport,
}

#[derive(Serialize)]
struct ArcResults {
    valuation: Value,
    orbit_face: FaceReport,
    special_point_in_singular_locus: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lifted: Option<LiftReport>,
}

pub fn arc(args: &ArcArgs) -> Out {
    let (doc, cone) = ConeDocument::load(&args.cone)?;
    let (arc, series, monomial) = match (&args.series, &args.monomial) {
        (Some(text), _) => {
            let parts: Vec<&str> = text.split(';').map(str::trim).collect();
            let arc = TorusArc::parse(&parts, args.truncation)?;
            (arc, Some(parts.iter().map(|s| s.to_string()).collect()), None)
        }
        (None, Some(text)) => {
            let v = parse_vector(text, cone.rank(), "--monomial")?;
            (monomial_arc(&v)?, None, Some(vector(&v)))
        }
        (None, None) => return Err(CliError::Input("one of --series or --monomial is required".into())),
    };
    if arc.rank() != cone.rank() {
        return Err(arcnash::Error::RankMismatch {
            expected: cone.rank(),
            found: arc.rank(),
        }
        .into());
    }
    let v = valuation_of_arc(&arc)?;
    let face = orbit_of_arc(&cone, &arc)?;
    let lifted = if args.fan {
        let (fan, _) = resolve_cone(&cone)?;
        let (chart, face) = lift_orbit(&fan, &arc)?;
        Some(LiftReport {
            chart: vectors(chart.rays()),
            face: FaceReport::new(&face),
        })
    } else {
        None
    };
    let results = ArcResults {
        valuation: vector(&v),
        orbit_face: FaceReport::new(&face),
        special_point_in_singular_locus: special_point_is_singular(&cone, &arc)?,
        lifted,
    };
    let inputs = ArcInputs {
        cone: doc,
        series,
        monomial,
        truncation_order: arc.truncation_order(),
        lift_to_resolution: args.fan,
    };
    Ok(Report::new("arc", inputs, results).render())
}

fn strings(v: &[TruncatedSeries<Q>]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Serialize)]
struct GermInputs<'a> {
    equation: &'a str,
    line: &'a str,
    order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve_tail: Option<&'a str>,
}

#[derive(Serialize)]
struct SolveReport {
    degree: u32,
    unknowns: usize,
    equations: usize,
    rank: usize,
}

#[derive(Serialize)]
struct GermResults {
    variables: Vec<String>,
    multiplicity: u32,
    tangent_cone: String,
    line_on_tangent_cone: bool,
    dfm_surjective: bool,
    curve: Vec<String>,
    surface: Vec<String>,
    residual_order: String,
    required_residual_order: u32,
    restriction_matches_curve: bool,
    tangent_plane_matches_line: bool,
    linear_solves: Vec<SolveReport>,
}

pub fn germ(args: &GermArgs) -> Out {
    let f = TruncatedSeries::<Q>::parse(&args.equation)?;
    let l = LineSpec::<Q>::parse(&args.line)?;
    if l.rank() != f.variables().len() {
        return Err(arcnash::Error::RankMismatch {
            expected: f.variables().len(),
            found: l.rank(),
        }
        .into());
    }
    let pieces = homogeneous_decomposition(&f)?;
    let (&m, fm) = pieces.iter().next().expect("nonzero");
    if m == 0 {
        return Err(arcnash::Error::NotAtOrigin.into());
    }
    let on_cone = line_on_cone(fm, &l)?;
    if !on_cone {
        return Err(arcnash::Error::LineNotOnCone.into());
    }
    let surjective = dfm_surjective(fm, &l)?;
    if !surjective {
        return Err(arcnash::Error::SurjectivityViolated.into());
    }
    let s = vec!["s".to_string()];
    let tail = match &args.curve_tail {
        Some(text) => Some(
            text.split(';')
                .map(|p| TruncatedSeries::<Q>::parse_in(p, &s))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let curve = curve_on_hypersurface(&f, l.point(), args.order, tail.as_deref())?;
    let germ = extend_curve_to_surface(&f, &curve, &l, args.order)?;
    let results = GermResults {
        variables: f.variables().to_vec(),
        multiplicity: m,
        tangent_cone: fm.to_string(),
        line_on_tangent_cone: on_cone,
        dfm_surjective: surjective,
        curve: strings(&curve),
        surface: strings(&germ.components),
        residual_order: germ.residual.to_string(),
        required_residual_order: m + args.order,
        restriction_matches_curve: germ.restriction_matches,
        tangent_plane_matches_line: germ.tangent_plane_matches,
        linear_solves: germ
            .steps
            .iter()
            .map(|s| SolveReport {
                degree: s.degree,
                unknowns: s.unknowns,
                equations: s.equations,
                rank: s.rank,
            })
            .collect(),
    };
    let inputs = GermInputs {
        equation: &args.equation,
        line: &args.line,
        order: args.order,
        curve_tail: args.curve_tail.as_deref(),
    };
    Ok(Report::new("germ", inputs, results).render())
}

#[derive(Serialize)]
struct JetInputs<'a> {
    equation: &'a str,
    order: u32,
}

#[derive(Serialize)]
struct JetResults {
    jet_variables: Vec<String>,
    equations: Vec<String>,
}

pub fn jets(equation: &str, order: u32) -> Out {
    let f = TruncatedSeries::<Q>::parse(equation)?;
    let eqs = jet_equations(&f, order)?;
    let jet_variables = eqs.first().map(|e| e.variables().to_vec()).unwrap_or_default();
    let results = JetResults {
        jet_variables,
        equations: strings(&eqs),
    };
    Ok(Report::new("jets", JetInputs { equation, order }, results).render())
}

#[derive(Serialize)]
struct BlowupInputs<'a> {
    equation: &'a str,
    chart: usize,
}

#[derive(Serialize)]
struct BlowupResults {
    variables: Vec<String>,
    strict_transform: String,
}

pub fn blowup(equation: &str, chart: usize) -> Out {
    let f = TruncatedSeries::<Q>::parse(equation)?;
    let g = blowup_chart_strict_transform(&f, chart)?;
    let results = BlowupResults {
        variables: g.variables().to_vec(),
        strict_transform: g.to_string(),
    };
    Ok(Report::new("blowup", BlowupInputs { equation, chart }, results).render())
}
