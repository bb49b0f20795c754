use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(itinerarium::cli::run(std::env::args_os()))
}
