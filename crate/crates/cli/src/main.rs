use std::process::ExitCode;

fn main() -> ExitCode {
    mhd_forms_cli::run(std::env::args_os())
}
