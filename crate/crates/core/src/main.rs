use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(catmodp::cli::run())
}
