use cilab_core::report::CriteriaReport;

use crate::{CliError, Format};

pub fn render(report: &CriteriaReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(report.to_json() + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let out = |e: csv::Error| CliError::Output(e.to_string());
            w.write_record(["label", "value"]).map_err(out)?;
            for (label, value) in report.flatten() {
                w.write_record([label, value]).map_err(out)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
        }
    }
}
