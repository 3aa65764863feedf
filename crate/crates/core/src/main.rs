fn main() -> std::process::ExitCode {
    codeloss::cli::main_entry()
}
