"""Shipped default data files: starter lexicon, taxonomy config,
demonstration category rules, team list, and the pre-derived team
assignment table with its evidence fixture."""
