from linefair.cli import main

main()
