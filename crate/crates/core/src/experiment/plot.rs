use std::fs;
use std::path::Path;

use serde_json::json;

use crate::analysis::{FrontSpeedEstimate, SpreadingReport};
use crate::solver::{fmt17, Trajectory};
use crate::Result;

/// What to turn into plot data.
pub enum PlotData<'a> {
    /// t, front position, and the predicted line through the first position.
    Front(&'a FrontSpeedEstimate),
    /// Measured and predicted support outlines per snapshot.
    Support(&'a SpreadingReport),
    /// t, total mass.
    Mass(&'a Trajectory),
}

pub fn plot_text(data: &PlotData) -> Result<String> {
    Ok(match data {
        PlotData::Front(e) => {
            let mut s = String::from("t,x_front,x_predicted\n");
            if let Some(&(t0, x0)) = e.positions.first() {
                for &(t, x) in &e.positions {
                    let pred = x0 + e.predicted_speed * (t - t0);
                    s.push_str(&format!("{},{},{}\n", fmt17(t), fmt17(x), fmt17(pred)));
                }
            }
            s
        }
        PlotData::Support(r) => {
            let rows: Vec<_> = r
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "t": row.t,
                        "measured": row.measured.outline(),
                        "predicted": row.predicted.outline(),
                        "hausdorff": row.hausdorff,
                        "contained": row.contained,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&rows)?
        }
        PlotData::Mass(traj) => {
            let mut s = String::from("t,mass\n");
            for (t, m) in &traj.mass_series {
                s.push_str(&format!("{},{}\n", fmt17(*t), fmt17(*m)));
            }
            s
        }
    })
}

/// Writes plain CSV (front, mass) or JSON (support) consumable by any
/// plotting tool.
pub fn emit_plot_data(data: &PlotData, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, plot_text(data)?)?;
    Ok(())
}
