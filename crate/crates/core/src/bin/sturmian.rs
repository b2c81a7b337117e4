use std::process::ExitCode;

fn main() -> ExitCode {
    sturmian::cli::main_entry()
}
