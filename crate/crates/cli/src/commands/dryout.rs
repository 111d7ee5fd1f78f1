use dryout_core::stefan::{Dryout, PROFILE_CHECK_POINTS};

use super::{Command, Context};
use crate::config::Mode;
use crate::error::RunError;
use crate::output::RunReport;
use crate::pipeline::{dryout, DryoutRun};

pub struct DryoutCommand;

/// Fills the shared part of the `dryout` and `profile` reports. Fails with
/// a no-solution error when the liquid never dries out.
pub(super) fn describe(run: &DryoutRun, report: &mut RunReport) -> Result<(), RunError> {
    let inp = &run.inputs;
    report.text("mode", if run.interface.is_some() { "eos" } else { "direct" });
    report.num("j", inp.j);
    report.num("theta_in", inp.theta_in);
    report.num("theta_star", inp.theta_star);
    report.num("latent_heat", inp.ell);
    if let Some(st) = &run.interface {
        report.num("rho_gas", st.solution.rho_g());
        report.num("p_liquid", st.solution.p_l);
        report.num("p_gas", st.solution.p_g);
        report.check("interface_residual", st.solution.residual, 1e-10 * st.p_c);
    }
    report.num("dryout_bound", inp.dryout_bound());
    match &run.dryout {
        Dryout::Absent { .. } => {
            report.text("exists", "false");
            Err(RunError::NoSolution(run.dryout.reason().unwrap_or_default()))
        }
        Dryout::Present(p) => {
            report.text("exists", "true");
            report.num("x_star", p.x_star);
            if let Some(u2) = p.u2 {
                report.num("u_gas", u2);
            }
            report.num("liquid_slope", p.liquid_slope);
            report.num("gas_slope", p.slope2);
            report.check(
                "stefan_residual",
                p.stefan_residual,
                1e-9 * (inp.ell * inp.j).abs(),
            );
            let excess = p.max_liquid_excess(PROFILE_CHECK_POINTS)?;
            report.check("max_liquid_excess", excess.max(0.0), 0.0);
            Ok(())
        }
    }
}

impl Command for DryoutCommand {
    fn name(&self) -> &'static str {
        "dryout"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<RunReport, RunError> {
        let run = dryout(ctx.config, ctx.models)?;
        debug_assert_eq!(run.interface.is_some(), ctx.config.mode == Mode::Eos);
        let mut report = RunReport::new(self.name());
        describe(&run, &mut report)?;
        Ok(report)
    }
}
