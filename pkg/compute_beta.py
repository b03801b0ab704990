#!/usr/bin/env python3
"""Convenience script to run the beta-function command line."""

from src.main import main

if __name__ == "__main__":
    main()
