#include "lbox/driver.hpp"

int main(int argc, char** argv) { return lbox::run_cli(argc, argv); }
