from creditindex.cli import main

main()
