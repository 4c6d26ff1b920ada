#include "multicascade/cli.hpp"

int main(int argc, char** argv) { return multicascade::run_cli(argc, argv); }
