fn main() -> std::process::ExitCode {
    toetd::harness::cli::main()
}
