use std::process::ExitCode;

fn main() -> ExitCode {
    let format = std::env::var("STOCON_OUTPUT").ok();
    let outcome = stocon::cli::run(std::env::args_os(), format.as_deref());
    if let Err(e) = stocon::cli::emit(&outcome) {
        eprintln!("stocon: cannot write report: {e}");
        return ExitCode::from(4);
    }
    ExitCode::from(outcome.code as u8)
}
