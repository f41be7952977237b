from itobound.cli import main

raise SystemExit(main())
