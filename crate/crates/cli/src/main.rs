use std::process::ExitCode;

fn main() -> ExitCode {
    hazard_eeg::cli::main_with(std::env::args_os())
}
