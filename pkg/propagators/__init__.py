# Пропагаторы: виды ядер, вычислитель, кэш и диагностики
