from deformary.cli import main

raise SystemExit(main())
