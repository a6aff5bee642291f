#include <oscillate/cli.hpp>

int main(int argc, char** argv) { return oscillate::run_cli(argc, argv); }
