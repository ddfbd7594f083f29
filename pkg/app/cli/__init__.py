# Command-line plumbing
