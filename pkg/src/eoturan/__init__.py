"""Edge-ordered Turan numbers for forests of order chromatic number 2."""
