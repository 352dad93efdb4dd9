use std::io::{stderr, stdout};
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_seed = std::env::var(liedeform_cli::SEED_ENV).ok();
    let code = liedeform_cli::run(
        std::env::args_os(),
        env_seed.as_deref(),
        &mut stdout().lock(),
        &mut stderr().lock(),
    );
    ExitCode::from(code as u8)
}
