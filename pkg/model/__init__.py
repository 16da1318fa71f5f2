# Модель: параметры, геометрия, гауссово ядро и срезки
