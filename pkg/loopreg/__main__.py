from loopreg.cli import main

raise SystemExit(main())
