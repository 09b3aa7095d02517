use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(kss_spectra::cli::run(std::env::args()) as u8)
}
