//! JSON report shapes. Field order is declaration order and every map is a
//! BTreeMap, so equal inputs serialize to equal bytes.

use serde::Serialize;
use tormod::ext::{ClassReport, ExtEntry};
use tormod::resolution::{ExactnessReport, ResolutionData};
use tormod::{Convention, DegreeWindow};

use crate::CliError;

#[derive(Serialize)]
pub struct WindowReport {
    pub t_min: i64,
    pub t_max: i64,
    pub margin: i64,
}

impl From<&DegreeWindow> for WindowReport {
    fn from(w: &DegreeWindow) -> Self {
        WindowReport {
            t_min: w.t_min,
            t_max: w.t_max,
            margin: w.margin,
        }
    }
}

#[derive(Serialize)]
pub struct ConventionReport {
    pub a: i64,
    pub b: i64,
    pub rule: String,
}

impl From<Convention> for ConventionReport {
    fn from(c: Convention) -> Self {
        ConventionReport {
            a: c.a,
            b: c.b,
            rule: c.describe(),
        }
    }
}

#[derive(Serialize)]
pub struct ExtReport {
    pub command: &'static str,
    pub source: String,
    pub target: String,
    pub r: usize,
    pub entries: Vec<ExtEntry>,
    pub convention: ConventionReport,
    pub window: WindowReport,
}

#[derive(Serialize)]
pub struct ChartReport {
    pub command: &'static str,
    pub source: String,
    pub target: String,
    pub r: usize,
    pub entries: Vec<ExtEntry>,
    pub convention: ConventionReport,
    pub window: WindowReport,
    pub classes: Vec<ClassReport>,
    pub chart: String,
}

#[derive(Serialize)]
pub struct KoszulReport {
    pub command: &'static str,
    pub generators: Vec<String>,
    pub ranks: Vec<usize>,
    pub free_ranks: Option<Vec<usize>>,
    pub resolution: ResolutionData,
    pub exactness: ExactnessReport,
    pub status: &'static str,
}

#[derive(Serialize)]
pub struct ResolveReport {
    pub command: &'static str,
    pub module: String,
    pub window: WindowReport,
    pub ranks: Vec<usize>,
    pub free_ranks: Option<Vec<usize>>,
    pub generator_degrees: Vec<Vec<i64>>,
    pub complete: bool,
    pub minimal: bool,
    pub resolution: ResolutionData,
    pub exactness: ExactnessReport,
}

#[derive(Serialize)]
pub struct DegreeDims {
    pub t: i64,
    pub module: usize,
    pub torsion: usize,
}

#[derive(Serialize)]
pub struct GeneratorReport {
    pub name: String,
    pub degree: i64,
}

#[derive(Serialize)]
pub struct PresentationReport {
    pub generators: Vec<GeneratorReport>,
    pub relations: Vec<String>,
}

#[derive(Serialize)]
pub struct TorsionReport {
    pub command: &'static str,
    pub module: String,
    pub window: WindowReport,
    pub dims: Vec<DegreeDims>,
    pub is_torsion: bool,
    pub presentation: PresentationReport,
}

#[derive(Serialize)]
pub struct AssignmentReport {
    pub generator: String,
    pub degree: i64,
    pub image: String,
}

#[derive(Serialize)]
pub struct VerdictReport {
    pub degree: i64,
    pub symmetric_dim: usize,
    pub homology_dim: usize,
    pub rank: usize,
    pub equivariant: bool,
    pub iso: bool,
}

#[derive(Serialize)]
pub struct FormalityReport {
    pub command: &'static str,
    pub cutoff: usize,
    pub assignment: Vec<AssignmentReport>,
    pub verdicts: Vec<VerdictReport>,
    pub summary: String,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
    pub needed: Option<[i64; 2]>,
    pub available: Option<[i64; 2]>,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

impl From<&CliError> for ErrorReport {
    fn from(e: &CliError) -> Self {
        let (needed, available) = match e {
            CliError::Engine(tormod::Error::Window {
                needed_lo,
                needed_hi,
                available_lo,
                available_hi,
                ..
            }) => (Some([*needed_lo, *needed_hi]), Some([*available_lo, *available_hi])),
            _ => (None, None),
        };
        ErrorReport {
            error: ErrorBody {
                kind: e.kind(),
                message: e.to_string(),
                needed,
                available,
            },
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
