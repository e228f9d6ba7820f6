from rosetta.cli import main

main()
