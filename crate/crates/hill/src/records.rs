//! Output records. Field names double as CSV column names and are frozen in
//! `schema/output-schema.json`.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1.0.0";

/// The frozen schema document shipped with the crate.
pub const SCHEMA: &str = include_str!("../schema/output-schema.json");

/// A record that is also a CSV row.
pub trait Row: Serialize {
    const TABLE: &'static str;
    const COLUMNS: &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

/// Shortest representation that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialInfo {
    pub kind: String,
    pub declared_period: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gap_right_width: f64,
    pub gap_closed: bool,
    pub closure_type: String,
}

impl Row for BandRow {
    const TABLE: &'static str = "bands";
    const COLUMNS: &'static [&'static str] = &["n", "alpha", "beta", "gap_right_width", "gap_closed", "closure_type"];
    fn cells(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            num(self.alpha),
            num(self.beta),
            num(self.gap_right_width),
            self.gap_closed.to_string(),
            self.closure_type.clone(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletRow {
    pub n: usize,
    pub mu: f64,
    pub delta: f64,
    pub delta_p: f64,
    pub delta_pp: f64,
}

impl Row for DirichletRow {
    const TABLE: &'static str = "dirichlet";
    const COLUMNS: &'static [&'static str] = &["n", "mu", "delta", "delta_p", "delta_pp"];
    fn cells(&self) -> Vec<String> {
        vec![self.n.to_string(), num(self.mu), num(self.delta), num(self.delta_p), num(self.delta_pp)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantRow {
    pub lambda: f64,
    pub delta: f64,
    pub delta_p: f64,
    pub delta_pp: f64,
    pub s1: f64,
}

impl Row for DiscriminantRow {
    const TABLE: &'static str = "discriminant";
    const COLUMNS: &'static [&'static str] = &["lambda", "delta", "delta_p", "delta_pp", "s1"];
    fn cells(&self) -> Vec<String> {
        vec![num(self.lambda), num(self.delta), num(self.delta_p), num(self.delta_pp), num(self.s1)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylRow {
    pub re: f64,
    pub im: f64,
    pub m11_re: f64,
    pub m11_im: f64,
    pub m12_re: f64,
    pub m12_im: f64,
    pub m21_re: f64,
    pub m21_im: f64,
    pub m22_re: f64,
    pub m22_im: f64,
}

impl Row for WeylRow {
    const TABLE: &'static str = "weyl";
    const COLUMNS: &'static [&'static str] =
        &["re", "im", "m11_re", "m11_im", "m12_re", "m12_im", "m21_re", "m21_im", "m22_re", "m22_im"];
    fn cells(&self) -> Vec<String> {
        [
            self.re,
            self.im,
            self.m11_re,
            self.m11_im,
            self.m12_re,
            self.m12_im,
            self.m21_re,
            self.m21_im,
            self.m22_re,
            self.m22_im,
        ]
        .into_iter()
        .map(num)
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub method: String,
    pub band: usize,
    pub edge: String,
    pub reference: f64,
    pub oracle: f64,
    pub defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Row for OracleRow {
    const TABLE: &'static str = "oracle";
    const COLUMNS: &'static [&'static str] =
        &["method", "band", "edge", "reference", "oracle", "defect", "tolerance", "pass"];
    fn cells(&self) -> Vec<String> {
        vec![
            self.method.clone(),
            self.band.to_string(),
            self.edge.clone(),
            num(self.reference),
            num(self.oracle),
            num(self.defect),
            num(self.tolerance),
            self.pass.to_string(),
        ]
    }
}

/// One line of the `verify` summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub section: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Row for CheckRow {
    const TABLE: &'static str = "checks";
    const COLUMNS: &'static [&'static str] = &["section", "name", "pass", "detail"];
    fn cells(&self) -> Vec<String> {
        vec![self.section.clone(), self.name.clone(), self.pass.to_string(), self.detail.clone()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandsDocument {
    pub schema_version: String,
    pub command: String,
    pub potential: PotentialInfo,
    pub bands: Vec<BandRow>,
    pub dirichlet: Vec<DirichletRow>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletDocument {
    pub schema_version: String,
    pub command: String,
    pub potential: PotentialInfo,
    pub dirichlet: Vec<DirichletRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantDocument {
    pub schema_version: String,
    pub command: String,
    pub potential: PotentialInfo,
    pub rows: Vec<DiscriminantRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylDocument {
    pub schema_version: String,
    pub command: String,
    pub potential: PotentialInfo,
    pub rows: Vec<WeylRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleMethod {
    pub method: String,
    /// `ok` or `error`.
    pub status: String,
    pub error: Option<String>,
    pub max_defect: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDocument {
    pub schema_version: String,
    pub command: String,
    pub potential: PotentialInfo,
    pub methods: Vec<OracleMethod>,
    pub rows: Vec<OracleRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub re_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerglotzEntry {
    pub function: String,
    pub grid: GridInfo,
    pub points: usize,
    pub min_signed_imag: f64,
    pub argmin: ComplexValue,
    pub symmetry_defect: f64,
    pub failed_evaluations: usize,
    pub first_failure: Option<String>,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteItem {
    pub item: String,
    pub statement: String,
    pub checked: usize,
    pub failed: usize,
    pub failures: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    /// `(-delta,-s)` or `(delta,-s)`.
    pub pair: String,
    pub interval: [f64; 2],
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub critical_points: Vec<f64>,
    pub items: Vec<SuiteItem>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueEntry {
    pub n: usize,
    /// `h+` or `h-`.
    pub function: String,
    pub mu: f64,
    pub gap_closed: bool,
    pub contour: ComplexValue,
    pub formula: f64,
    pub noise: f64,
    pub threshold: f64,
    pub defect: f64,
    pub removable: bool,
    pub circle_radius: f64,
    pub stability_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub schema_version: String,
    pub command: String,
    pub potential: PotentialInfo,
    /// Always `normalized`: values refer to the period-1 problem.
    pub units: String,
    /// `T²`; original eigenvalues are normalized ones divided by this.
    pub energy_scale: f64,
    pub herglotz: Vec<HerglotzEntry>,
    pub oscillation: Vec<SuiteEntry>,
    pub residues: Vec<ResidueEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn keys_of<R: Row>(row: &R) -> Vec<String> {
        match serde_json::to_value(row).unwrap() {
            Value::Object(m) => m.keys().cloned().collect(),
            _ => unreachable!(),
        }
    }

    fn assert_columns<R: Row>(row: R) {
        let mut keys = keys_of(&row);
        let mut cols: Vec<String> = R::COLUMNS.iter().map(|s| s.to_string()).collect();
        assert_eq!(row.cells().len(), cols.len());
        keys.sort();
        cols.sort();
        assert_eq!(keys, cols, "table {}", R::TABLE);
    }

    #[test]
    fn csv_columns_match_json_fields() {
        assert_columns(BandRow {
            n: 0,
            alpha: 0.0,
            beta: 1.0,
            gap_right_width: 0.0,
            gap_closed: true,
            closure_type: "periodic".into(),
        });
        assert_columns(DirichletRow { n: 1, mu: 0.0, delta: 0.0, delta_p: 0.0, delta_pp: 0.0 });
        assert_columns(DiscriminantRow { lambda: 0.0, delta: 0.0, delta_p: 0.0, delta_pp: 0.0, s1: 0.0 });
        assert_columns(WeylRow {
            re: 0.0,
            im: 0.0,
            m11_re: 0.0,
            m11_im: 0.0,
            m12_re: 0.0,
            m12_im: 0.0,
            m21_re: 0.0,
            m21_im: 0.0,
            m22_re: 0.0,
            m22_im: 0.0,
        });
        assert_columns(OracleRow {
            method: "bloch".into(),
            band: 0,
            edge: "alpha".into(),
            reference: 0.0,
            oracle: 0.0,
            defect: 0.0,
            tolerance: 0.0,
            pass: true,
        });
        assert_columns(CheckRow { section: "s".into(), name: "n".into(), pass: true, detail: String::new() });
    }

    #[test]
    fn schema_file_is_frozen_to_the_code() {
        let schema: Value = serde_json::from_str(SCHEMA).unwrap();
        assert_eq!(schema["schema_version"], SCHEMA_VERSION);
        let tables = &schema["csv_tables"];
        let check = |name: &str, cols: &[&str]| {
            let listed: Vec<&str> = tables[name].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
            assert_eq!(listed, cols, "table {name}");
        };
        check(BandRow::TABLE, BandRow::COLUMNS);
        check(DirichletRow::TABLE, DirichletRow::COLUMNS);
        check(DiscriminantRow::TABLE, DiscriminantRow::COLUMNS);
        check(WeylRow::TABLE, WeylRow::COLUMNS);
        check(OracleRow::TABLE, OracleRow::COLUMNS);
        check(CheckRow::TABLE, CheckRow::COLUMNS);
        assert_eq!(tables.as_object().unwrap().len(), 6);
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, -0.0, 1e-20, 1.0 / 3.0, 2.0f64.sqrt() * 1e300, -7.5] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
