# Состояния: интегрирование, ожидания, сканы, KMS и эволюция
