from smellscope.cli import main

raise SystemExit(main())
