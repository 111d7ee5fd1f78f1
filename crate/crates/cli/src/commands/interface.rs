use dryout_core::interface::sign_changes_modified;

use super::{Command, Context};
use crate::error::RunError;
use crate::output::RunReport;
use crate::pipeline::{interface_stage, SIGN_CHANGE_GRID};

pub struct InterfaceCommand;

impl Command for InterfaceCommand {
    fn name(&self) -> &'static str {
        "interface"
    }

    fn run(&self, ctx: &Context<'_>) -> Result<RunReport, RunError> {
        let st = interface_stage(ctx.config, ctx.models)?;
        let s = &st.solution;
        let mut report = RunReport::new(self.name());
        report.num("j", s.j);
        report.num("theta_b", s.theta_b);
        report.num("theta_star", s.theta_star);
        report.num("rho_liquid", 1.0 / s.v_l);
        report.num("rho_gas", s.rho_g());
        report.num("p_liquid", s.p_l);
        report.num("p_gas", s.p_g);
        report.num("latent_heat", st.latent_heat);
        report.text("continuation_steps", s.steps.to_string());
        report.check("interface_residual", s.residual, 1e-10 * st.p_c);
        let (dp, dg) = s.modified_jumps(st.model.as_ref())?;
        report.check("modified_pressure_jump", dp, 1e-9 * st.p_c);
        let scale = (st.model.psi(s.v_l, s.theta_star).abs() + (s.p_l * s.v_l).abs()).max(1.0);
        report.check("modified_potential_jump", dg, 1e-9 * scale);
        let count = sign_changes_modified(st.model.as_ref(), s.theta_star, s.j, SIGN_CHANGE_GRID)?;
        report.text("modified_sign_changes", count.to_string());
        Ok(report)
    }
}
