# Функционалы: точные коэффициенты, свертки Вика, произведения, ряды и вычисление
