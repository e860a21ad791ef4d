use std::process::ExitCode;

fn main() -> ExitCode {
    templater::cli::main_with_args(std::env::args_os())
}
