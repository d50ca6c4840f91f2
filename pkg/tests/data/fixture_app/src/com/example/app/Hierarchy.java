package com.example.app;

class D7 {
}

class D6 extends D7 {
}

class D5 extends D6 {
}

class D4 extends D5 {
}

class D3 extends D4 {
}

class D2 extends D3 {
}

class D1 extends D2 {
}
