use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = revival_cli::configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code() as u8);
    }
    ExitCode::from(revival_cli::app::run_from_args(std::env::args_os()) as u8)
}
