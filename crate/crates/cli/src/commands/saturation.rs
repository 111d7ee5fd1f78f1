use dryout_core::saturation::{clausius_clapeyron_residual, saturation_curve};

use super::{Command, Context};
use crate::error::RunError;
use crate::output::{fmt_num, RunReport, Table};

/// Default temperature window as fractions of the critical temperature.
const WINDOW: (f64, f64) = (0.5, 0.99);

pub struct SaturationCommand;

impl Command for SaturationCommand {
    fn name(&self) -> &'static str {
        "saturation"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<RunReport, RunError> {
        let block = ctx
            .config
            .eos
            .as_ref()
            .ok_or_else(|| RunError::Invalid("saturation needs mode = eos".into()))?;
        let model = block.build(ctx.models)?;
        let cp = model.critical_point()?;
        let (lo, hi) = match &ctx.options.sweep {
            Some(s) if s.param == "theta" => (s.from, s.to),
            Some(s) => {
                return Err(RunError::Invalid(format!(
                    "saturation only ranges over 'theta', not '{}'",
                    s.param
                )))
            }
            None => (WINDOW.0 * cp.theta_c, WINDOW.1 * cp.theta_c),
        };
        let n = ctx.options.points()?;
        let curve = saturation_curve(model.as_ref(), lo, hi, n)?;

        let mut report = RunReport::new(self.name());
        report.num("theta_c", cp.theta_c);
        report.num("v_c", cp.v_c);
        report.num("p_c", cp.p_c);
        report.text("points", n.to_string());
        let bitangent = curve
            .iter()
            .map(|s| s.pressure_residual(model.as_ref()))
            .fold(0.0, f64::max);
        report.check("max_pressure_residual", bitangent, 1e-9 * cp.p_c);
        let mid = curve[curve.len() / 2].theta;
        let h = 1e-4 * cp.theta_c;
        if mid + h < 0.999 * cp.theta_c {
            let cc = clausius_clapeyron_residual(model.as_ref(), mid, h)?;
            report.num("clausius_clapeyron_theta", mid);
            report.check("clausius_clapeyron_residual", cc.residual, 1e-5);
        }

        let mut table = Table::new(&["theta", "v_l_star", "v_g_star", "p_star", "latent_heat"]);
        for s in &curve {
            table.push(vec![
                fmt_num(s.theta),
                fmt_num(s.v_l_star),
                fmt_num(s.v_g_star),
                fmt_num(s.p_star),
                fmt_num(s.ell),
            ]);
        }
        report.table = Some(table);
        Ok(report)
    }
}
