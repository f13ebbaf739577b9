LINES: dict[int, str] = {}
