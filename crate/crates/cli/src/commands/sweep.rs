use dryout_core::numerics::lin_space;

use super::{Command, Context};
use crate::error::RunError;
use crate::output::{fmt_num, RunReport, Table};
use crate::pipeline::dryout;

pub struct SweepCommand;

impl Command for SweepCommand {
    fn name(&self) -> &'static str {
        "sweep"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<RunReport, RunError> {
        let spec = ctx
            .options
            .sweep
            .as_ref()
            .ok_or_else(|| RunError::Invalid("sweep needs --param NAME --from F --to F".into()))?;
        if !spec.from.is_finite() || !spec.to.is_finite() || spec.from == spec.to {
            return Err(RunError::Invalid(format!(
                "sweep range [{}, {}] must be finite and non-empty",
                spec.from, spec.to
            )));
        }
        let n = ctx.options.points()?;

        let mut table = Table::new(&["param", "x_star", "exists"]);
        let mut found = 0;
        for value in lin_space(spec.from, spec.to, n) {
            let cfg = ctx.config.with_value(&spec.param, value, ctx.models)?;
            let x_star = match dryout(&cfg, ctx.models) {
                Ok(run) => run.dryout.x_star(),
                Err(RunError::NoSolution(_)) => None,
                Err(e) => return Err(e),
            };
            found += x_star.is_some() as usize;
            table.push(vec![
                fmt_num(value),
                x_star.map(fmt_num).unwrap_or_default(),
                x_star.is_some().to_string(),
            ]);
        }

        let mut report = RunReport::new(self.name());
        report.text("param", spec.param.clone());
        report.num("from", spec.from);
        report.num("to", spec.to);
        report.text("points", n.to_string());
        report.text("with_dryout", found.to_string());
        report.table = Some(table);
        Ok(report)
    }
}
