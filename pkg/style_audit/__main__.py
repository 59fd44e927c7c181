# -*- coding: utf-8 -*-
"""python -m style_audit 入口"""

from style_audit.cli.main import main

if __name__ == "__main__":
    main()
