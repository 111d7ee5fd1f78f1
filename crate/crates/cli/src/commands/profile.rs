use super::dryout::describe;
use super::{Command, Context};
use crate::error::RunError;
use crate::output::{fmt_num, RunReport, Table};
use crate::pipeline::dryout;

pub struct ProfileCommand;

impl Command for ProfileCommand {
    fn name(&self) -> &'static str {
        "profile"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<RunReport, RunError> {
        let run = dryout(ctx.config, ctx.models)?;
        let mut report = RunReport::new(self.name());
        describe(&run, &mut report)?;
        let p = run
            .dryout
            .profile()
            .expect("describe rejects a missing dryout point");

        // twice the dryout length shows both branches
        let x_max = ctx.options.xmax.unwrap_or(2.0 * p.x_star);
        if !(x_max > 0.0) || !x_max.is_finite() {
            return Err(RunError::Invalid(format!(
                "--xmax must be positive (got {x_max})"
            )));
        }
        report.num("x_max", x_max);
        let mut table = Table::new(&["x", "theta", "phase"]);
        for (x, theta, phase) in p.sample(x_max, ctx.options.points()?)? {
            table.push(vec![fmt_num(x), fmt_num(theta), phase.label().to_string()]);
        }
        report.table = Some(table);
        Ok(report)
    }
}
