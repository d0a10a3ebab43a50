use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(privgauge::cli::run(std::env::args_os()) as u8)
}
