use std::process::ExitCode;

fn main() -> ExitCode {
    hypercycle::cli::run()
}
