namespace ittm {}
