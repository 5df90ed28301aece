# ABOUTME: Utils package for serialization, digests, atomic writes and point-cloud export
# ABOUTME: Shared by the parsers, the services and the CLI
