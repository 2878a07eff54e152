# Package marker for the command-line entrypoint
