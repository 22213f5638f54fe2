#include <iostream>

#include "mpf/app.hpp"

int main(int argc, char** argv) { return mpf::app::run(argc, argv, std::cout, std::cerr); }
