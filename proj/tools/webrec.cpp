#include "webrec/cli.hpp"

int main(int argc, char** argv) { return webrec::run_cli(argc, argv); }
