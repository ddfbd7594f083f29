# CLI models
