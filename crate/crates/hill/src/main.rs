use std::io::{stderr, stdout};
use std::process::ExitCode;

fn main() -> ExitCode {
    let args = std::env::args_os().collect();
    let tol = std::env::var(hill::cli::TOL_ENV).ok();
    let code = hill::cli::run(args, tol, &mut stdout().lock(), &mut stderr().lock());
    ExitCode::from(code as u8)
}
