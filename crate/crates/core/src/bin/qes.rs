fn main() -> std::process::ExitCode {
    qes::cli::main()
}
