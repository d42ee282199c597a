//! Tabulated closed forms checked against the numerical pipeline.
//!
//! Every tabulated expression (propagator, evolved state, averaged block
//! entries and the three measures for each model) is evaluated as printed
//! and compared with the quadrature result at the same parameters.

use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::measures::{self, DomainFlag, FormulaValue, MeasureTriple};
use crate::model::{self, Realization, SystemParams};
use crate::noise::{self, BlockEntries, CouplingModel, StaticNoiseParams};
use crate::quadrature::QuadratureSpec;

/// Agreement tolerance between printed and pipeline values.
pub const AGREEMENT_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParameterPoint {
    pub lambda: f64,
    pub delta_m: f64,
    pub delta_o: f64,
    pub t: f64,
}

impl ParameterPoint {
    pub fn noise(&self) -> Result<StaticNoiseParams> {
        StaticNoiseParams::new(self.delta_m, self.delta_o)
    }

    /// The fixed realization used for the per-realization formulas: one
    /// quarter width either side of the mean, so `Δa ≠ Δb`.
    pub fn realization(&self) -> Realization {
        Realization::new(self.delta_o - 0.25 * self.delta_m, self.delta_o + 0.25 * self.delta_m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Agrees,
    /// Printed value equals the negated pipeline value.
    SignFlipped,
    Disagrees,
    /// Printed expression cannot be evaluated as a real number here.
    Flagged,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Agrees => "agrees",
            Status::SignFlipped => "sign-flipped",
            Status::Disagrees => "disagrees",
            Status::Flagged => "flagged",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub formula: &'static str,
    pub model: Option<CouplingModel>,
    pub point: ParameterPoint,
    pub printed: FormulaValue,
    pub pipeline: f64,
    /// `|printed - pipeline|`, or the Frobenius distance for matrix formulas.
    pub abs_diff: Option<f64>,
    pub status: Status,
}

impl Record {
    fn scalar(
        formula: &'static str,
        model: Option<CouplingModel>,
        point: ParameterPoint,
        printed: FormulaValue,
        pipeline: f64,
    ) -> Self {
        let (abs_diff, status) = match &printed {
            Ok(v) => {
                let d = (v - pipeline).abs();
                let status = if d <= AGREEMENT_TOLERANCE {
                    Status::Agrees
                } else if (v + pipeline).abs() <= AGREEMENT_TOLERANCE {
                    Status::SignFlipped
                } else {
                    Status::Disagrees
                };
                (Some(d), status)
            }
            Err(_) => (None, Status::Flagged),
        };
        Record {
            formula,
            model,
            point,
            printed,
            pipeline,
            abs_diff,
            status,
        }
    }

    /// Matrix formulas report norms in the value columns and the distance
    /// between the two matrices as the difference.
    fn matrix(formula: &'static str, point: ParameterPoint, printed: &Mat4, pipeline: &Mat4) -> Self {
        let d = printed.frobenius_distance(pipeline);
        Record {
            formula,
            model: None,
            point,
            printed: Ok(printed.frobenius_norm()),
            pipeline: pipeline.frobenius_norm(),
            abs_diff: Some(d),
            status: if d <= AGREEMENT_TOLERANCE {
                Status::Agrees
            } else {
                Status::Disagrees
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReconciliationReport {
    pub records: Vec<Record>,
}

/// Every formula id the report covers.
pub const FORMULA_IDS: [&str; 17] = [
    "U_ab",
    "rho_ab",
    "h11_ccm",
    "h12_ccm",
    "h21_ccm",
    "h22_ccm",
    "p11_dcm",
    "p12_dcm",
    "p21_dcm",
    "p22_dcm",
    "p11_dcm_reconciled",
    "D_ccm",
    "P_ccm",
    "C_ccm",
    "D_dcm",
    "P_dcm",
    "C_dcm",
];

impl ReconciliationReport {
    pub fn build(points: &[ParameterPoint], q: &QuadratureSpec) -> Result<Self> {
        let mut records = Vec::new();
        for &pt in points {
            records.extend(records_at(pt, q)?);
        }
        Ok(ReconciliationReport { records })
    }

    pub fn for_formula<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.formula == id)
    }

    /// Ids with at least one record in `status`.
    pub fn formulas_with(&self, status: Status) -> Vec<&'static str> {
        let mut ids: Vec<&'static str> = self
            .records
            .iter()
            .filter(|r| r.status == status)
            .map(|r| r.formula)
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "formula,model,lambda,delta_m,delta_o,t,printed,pipeline,abs_diff,status")?;
        for r in &self.records {
            let model = r.model.map(|m| m.name()).unwrap_or("");
            let printed = match &r.printed {
                Ok(v) => format!("{v:?}"),
                Err(flag) => format!("\"{}\"", flag_text(flag)),
            };
            let diff = r.abs_diff.map(|d| format!("{d:?}")).unwrap_or_default();
            let p = r.point;
            writeln!(
                w,
                "{},{},{:?},{:?},{:?},{:?},{},{:?},{},{}",
                r.formula, model, p.lambda, p.delta_m, p.delta_o, p.t, printed, r.pipeline, diff, r.status
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("report is ASCII")
    }
}

fn flag_text(flag: &DomainFlag) -> String {
    flag.to_string().replace('"', "'")
}

fn records_at(pt: ParameterPoint, q: &QuadratureSpec) -> Result<Vec<Record>> {
    if !(pt.t > 0.0 && pt.t.is_finite()) {
        return Err(Error::Domain(format!("comparison time {} must be > 0", pt.t)));
    }
    let n = pt.noise()?;
    let p = SystemParams::new(0.0, 0.0, pt.lambda, 1.0)?;
    let real = pt.realization();
    let mut out = Vec::with_capacity(FORMULA_IDS.len());

    out.push(Record::matrix(
        "U_ab",
        pt,
        &model::explicit_pair_propagator(0.0, pt.lambda, real, pt.t),
        &model::pair_propagator(&p, real, pt.t),
    ));
    out.push(Record::matrix(
        "rho_ab",
        pt,
        &model::explicit_evolved_state(pt.lambda, real, pt.t),
        model::evolve_realization(&p, real, pt.t)?.matrix(),
    ));

    let ccm_avg = noise::average_ccm(&p, &n, pt.t, q)?;
    let dcm_avg = noise::average_dcm(&p, &n, pt.t, q)?;
    let ccm = Some(CouplingModel::Ccm);
    let dcm = Some(CouplingModel::Dcm);

    let block = |ids: [&'static str; 4], model, printed: BlockEntries, avg: BlockEntries| {
        [
            Record::scalar(ids[0], model, pt, Ok(printed.e11.re), avg.e11.re),
            Record::scalar(ids[1], model, pt, Ok(printed.e12.im), avg.e12.im),
            Record::scalar(ids[2], model, pt, Ok(printed.e21.im), avg.e21.im),
            Record::scalar(ids[3], model, pt, Ok(printed.e22.re), avg.e22.re),
        ]
    };
    let ccm_block = BlockEntries::from_matrix(ccm_avg.matrix());
    let dcm_block = BlockEntries::from_matrix(dcm_avg.matrix());
    out.extend(block(
        ["h11_ccm", "h12_ccm", "h21_ccm", "h22_ccm"],
        ccm,
        noise::ccm_entries(&n, pt.lambda, pt.t),
        ccm_block,
    ));
    out.extend(block(
        ["p11_dcm", "p12_dcm", "p21_dcm", "p22_dcm"],
        dcm,
        noise::dcm_entries_printed(&n, pt.lambda, pt.t),
        dcm_block,
    ));
    out.push(Record::scalar(
        "p11_dcm_reconciled",
        dcm,
        pt,
        Ok(noise::dcm_entries(&n, pt.lambda, pt.t).e11.re),
        dcm_block.e11.re,
    ));

    for (model, avg, ids) in [
        (CouplingModel::Ccm, &ccm_avg, ["D_ccm", "P_ccm", "C_ccm"]),
        (CouplingModel::Dcm, &dcm_avg, ["D_dcm", "P_dcm", "C_dcm"]),
    ] {
        let printed = measures::closed_form_measures(model, &n, pt.lambda, pt.t);
        let m = MeasureTriple::of(avg)?;
        out.push(Record::scalar(ids[0], Some(model), pt, printed.decoherence, m.decoherence));
        out.push(Record::scalar(ids[1], Some(model), pt, printed.purity, m.purity));
        out.push(Record::scalar(ids[2], Some(model), pt, printed.concurrence, m.concurrence));
    }
    Ok(out)
}
