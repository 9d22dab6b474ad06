#include <bitsort/cli.hpp>

#include <iostream>

int main( int argc, char** argv )
{
  return bitsort::cli::run( argc, argv, std::cout, std::cerr );
}
