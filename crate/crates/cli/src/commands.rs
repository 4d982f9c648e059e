//! The six commands. Each returns the text of its JSON report plus an
//! optional chart and a one-line human summary.

use tormod::ext::{e2_report_with_resolution, ext_with_resolution, render_chart, resolution_for_ext, ExtEntry};
use tormod::formality::FormalityMap;
use tormod::module::{format_vector, is_torsion};
use tormod::resolution::present_realized;
use tormod::{
    build_formality_map, koszul_complex, minimal_free_resolution, torsion_submodule, verify_quasi_iso, Convention,
    DegreeWindow, Error, GradedModulePresentation, Resolution,
};

use crate::cache::{self, Cache, Conventions, Lookup};
use crate::config::Session;
use crate::report::*;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Ext,
    Koszul,
    Resolve,
    Torsion,
    Formality,
    Chart,
}

/// Command-line overrides of the config.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub window: Option<(i64, i64)>,
    pub margin: Option<i64>,
    pub source: Option<String>,
    pub target: Option<String>,
    pub module: Option<String>,
    pub convention: Option<Convention>,
}

pub struct Output {
    pub json: String,
    pub chart: Option<String>,
    pub summary: String,
    pub cache: Option<Lookup>,
}

pub fn window(session: &Session, o: &Overrides) -> Result<DegreeWindow, CliError> {
    let (t_min, t_max) = o.window.unwrap_or((session.window.t_min, session.window.t_max));
    let margin = o.margin.unwrap_or(session.window.margin);
    Ok(DegreeWindow::new(t_min, t_max, margin)?)
}

fn pick<'a>(flag: &'a Option<String>, config: Option<&'a String>, what: &str) -> Result<&'a str, CliError> {
    flag.as_deref()
        .or(config.map(String::as_str))
        .ok_or_else(|| CliError::Usage(format!("no {what} given: pass --{what} or name it in the config")))
}

pub fn run(command: Command, session: &Session, o: &Overrides, cache: &Cache) -> Result<Output, CliError> {
    match command {
        Command::Ext => ext(session, o, cache, false),
        Command::Chart => ext(session, o, cache, true),
        Command::Koszul => koszul(session, o),
        Command::Resolve => resolve(session, o, cache),
        Command::Torsion => torsion(session, o),
        Command::Formality => formality(session),
    }
}

fn ext_resolution(
    cache: &Cache,
    m: &GradedModulePresentation,
    n: &GradedModulePresentation,
    w: &DegreeWindow,
    convention: Convention,
) -> Result<(Resolution, Lookup), CliError> {
    let key = cache::key("ext", &Conventions::current(convention), w, &[m, n]);
    Ok(cache.resolution(&key, m, || resolution_for_ext(m, n, w))?)
}

fn ext(session: &Session, o: &Overrides, cache: &Cache, chart_only: bool) -> Result<Output, CliError> {
    let source = pick(&o.source, session.ext.as_ref().map(|e| &e.0), "source")?;
    let target = pick(&o.target, session.ext.as_ref().map(|e| &e.1), "target")?;
    let m = session.module(source)?;
    let n = session.module(target)?;
    let w = window(session, o)?;
    let convention = o.convention.unwrap_or(session.convention);
    let (res, lookup) = ext_resolution(cache, m, n, &w, convention)?;
    let table = ext_with_resolution(&res, n, w.t_min, w.t_max)?;
    let entries: Vec<ExtEntry> = table.nonzero().into_iter().cloned().collect();
    let summary = format!(
        "Ext({source}, {target}) over t in [{}, {}]: {} nonzero bidegrees, total dimension {}",
        w.t_min,
        w.t_max,
        entries.len(),
        entries.iter().map(|e| e.dim).sum::<usize>()
    );
    let (json, chart) = if chart_only {
        let report = e2_report_with_resolution(&res, n, &w, convention)?;
        let json = to_json(&ChartReport {
            command: "chart",
            source: source.into(),
            target: target.into(),
            r: table.r,
            entries,
            convention: convention.into(),
            window: (&w).into(),
            classes: report.classes,
            chart: report.chart.clone(),
        });
        (json, report.chart)
    } else {
        let chart = render_chart(&table, convention, w.t_min, w.t_max);
        let json = to_json(&ExtReport {
            command: "ext",
            source: source.into(),
            target: target.into(),
            r: table.r,
            entries,
            convention: convention.into(),
            window: (&w).into(),
        });
        (json, chart)
    };
    Ok(Output {
        json,
        chart: Some(chart),
        summary,
        cache: Some(lookup),
    })
}

fn koszul(session: &Session, o: &Overrides) -> Result<Output, CliError> {
    let ring = &session.ring;
    let w = window(session, o)?;
    let k = koszul_complex(ring);
    let qw = GradedModulePresentation::residue_regular(ring.clone()).realize(w.t_min, w.t_max)?;
    let complex = k.realize_augmented(&qw, w.t_min, w.t_max)?;
    complex.check_maps()?;
    let exactness = complex.verify_exactness(w.t_min, w.t_max)?;
    if !exactness.exact {
        return Err(Error::Invariant(format!("Koszul complex has homology {:?}", exactness.homology)).into());
    }
    let summary = format!(
        "Koszul complex: ranks {:?}, exact on [{}, {}]",
        k.ranks(),
        w.t_min,
        w.t_max
    );
    let json = to_json(&KoszulReport {
        command: "koszul",
        generators: ring.generators().names().to_vec(),
        ranks: k.ranks(),
        free_ranks: k.free_ranks(),
        resolution: k.data().clone(),
        exactness,
        status: "exact",
    });
    Ok(Output {
        json,
        chart: None,
        summary,
        cache: None,
    })
}

fn resolve(session: &Session, o: &Overrides, cache: &Cache) -> Result<Output, CliError> {
    let name = pick(&o.module, session.resolve.as_ref(), "module")?;
    let m = session.module(name)?;
    let w = window(session, o)?;
    let convention = o.convention.unwrap_or(session.convention);
    let key = cache::key("resolve", &Conventions::current(convention), &w, &[m]);
    let (res, lookup) = cache.resolution(&key, m, || minimal_free_resolution(m, &w))?;
    let (lo, hi) = (res.data().lo, res.data().hi);
    let realized = m.realize(lo, hi)?;
    let exactness = res.realize_augmented(&realized, lo, hi)?.verify_exactness(lo, hi)?;
    if !exactness.exact {
        return Err(Error::Invariant(format!("resolution of {name} has homology {:?}", exactness.homology)).into());
    }
    let summary = format!(
        "resolution of {name}: ranks {:?}, {}",
        res.ranks(),
        if res.is_complete() {
            "complete"
        } else {
            "truncated below the window"
        }
    );
    let json = to_json(&ResolveReport {
        command: "resolve",
        module: name.into(),
        window: (&w).into(),
        ranks: res.ranks(),
        free_ranks: res.free_ranks(),
        generator_degrees: res.terms().iter().map(|t| t.sorted_degrees()).collect(),
        complete: res.is_complete(),
        minimal: res.is_minimal(),
        resolution: res.data().clone(),
        exactness,
    });
    Ok(Output {
        json,
        chart: None,
        summary,
        cache: Some(lookup),
    })
}

fn term(coefficient: &str, generator: &str) -> String {
    match coefficient {
        "1" => generator.to_string(),
        "-1" => format!("-{generator}"),
        c if c[1..].contains([' ', '+', '-']) => format!("({c})*{generator}"),
        c => format!("{c}*{generator}"),
    }
}

fn presentation_report(p: &GradedModulePresentation) -> PresentationReport {
    let ring = p.ring();
    let relations = p
        .relations()
        .iter()
        .map(|rel| {
            let mut out = String::new();
            for (a, (g, _)) in rel.iter().zip(p.generators()).filter(|(a, _)| !a.is_zero()) {
                let t = term(&ring.format(a), g);
                match t.strip_prefix('-') {
                    Some(rest) if !out.is_empty() => out.push_str(&format!(" - {rest}")),
                    _ if !out.is_empty() => out.push_str(&format!(" + {t}")),
                    _ => out.push_str(&t),
                }
            }
            out
        })
        .collect();
    PresentationReport {
        generators: p
            .generators()
            .iter()
            .map(|(name, degree)| GeneratorReport {
                name: name.clone(),
                degree: *degree,
            })
            .collect(),
        relations,
    }
}

fn torsion(session: &Session, o: &Overrides) -> Result<Output, CliError> {
    let name = pick(&o.module, session.torsion.as_ref(), "module")?;
    let m = session.module(name)?;
    let w = window(session, o)?;
    let realized = m.realize(w.lo(), w.hi())?;
    let gamma = torsion_submodule(&realized, &w)?;
    let torsion = is_torsion(&realized, &w)?;
    let presentation = present_realized(&gamma.module)?;
    let dims = (w.t_min..=w.t_max)
        .map(|t| DegreeDims {
            t,
            module: realized.dim(t).unwrap_or(0),
            torsion: gamma.module.dim(t).unwrap_or(0),
        })
        .collect::<Vec<_>>();
    let summary = format!(
        "torsion of {name}: total dimension {} of {} on [{}, {}], is_torsion = {torsion}",
        dims.iter().map(|d| d.torsion).sum::<usize>(),
        dims.iter().map(|d| d.module).sum::<usize>(),
        w.t_min,
        w.t_max
    );
    let json = to_json(&TorsionReport {
        command: "torsion",
        module: name.into(),
        window: (&w).into(),
        dims,
        is_torsion: torsion,
        presentation: presentation_report(&presentation),
    });
    Ok(Output {
        json,
        chart: None,
        summary,
        cache: None,
    })
}

fn assignment(map: &FormalityMap, session_names: impl Fn(i64) -> Vec<String>) -> Vec<AssignmentReport> {
    let v = map.generators();
    v.names()
        .iter()
        .zip(v.degrees())
        .zip(&map.images)
        .map(|((name, &degree), image)| AssignmentReport {
            generator: name.clone(),
            degree,
            image: format_vector(image, &session_names(degree)),
        })
        .collect()
}

fn formality(session: &Session) -> Result<Output, CliError> {
    let dga = session
        .dga
        .as_ref()
        .ok_or_else(|| CliError::Usage("formality needs a [dga] block in the config".into()))?;
    let map = build_formality_map(&dga.algebra, &dga.indecomposables)?;
    let verdict = verify_quasi_iso(&dga.algebra, &map, dga.cutoff)?;
    let names = |n: i64| dga.algebra.names(n).map(<[String]>::to_vec).unwrap_or_default();
    let json = to_json(&FormalityReport {
        command: "formality",
        cutoff: dga.cutoff,
        assignment: assignment(&map, names),
        verdicts: verdict
            .degrees
            .iter()
            .map(|d| VerdictReport {
                degree: d.degree,
                symmetric_dim: d.symmetric_dim,
                homology_dim: d.homology_dim,
                rank: d.rank,
                equivariant: d.equivariant,
                iso: d.iso,
            })
            .collect(),
        summary: verdict.summary(),
    });
    Ok(Output {
        json,
        chart: None,
        summary: verdict.summary(),
        cache: None,
    })
}
